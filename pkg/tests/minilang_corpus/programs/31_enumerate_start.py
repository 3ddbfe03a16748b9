for i, ch in enumerate("abc", 1):
    print(i, ch)
