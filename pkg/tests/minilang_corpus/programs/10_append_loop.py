squares = []
for n in range(5):
    squares.append(n * n)
print(squares)
print(len(squares))
