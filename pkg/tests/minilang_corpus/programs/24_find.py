s = "hello"
print(s.find("l"))
print(s.find("z"))
print(s.find("lo"))
