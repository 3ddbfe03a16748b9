def greet(name):
    print("hi " + name)

result = greet("sam")
print(result)
