for row in range(1, 4):
    line = ""
    for col in range(1, 4):
        line = line + str(row * col) + " "
    print(line.strip())
