n = 17
while n > 1 and n % 2 == 1:
    print(n)
    n = n - 4
print("done", n)
