a = [1, 2]
b = [3, 4]
a.extend(b)
a.extend("xy")
print(a, len(a))
