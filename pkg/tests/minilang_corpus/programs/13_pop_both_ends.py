stack = [10, 20, 30, 40]
last = stack.pop()
first = stack.pop(0)
print(last, first)
print(stack)
