basket = ["apple", "pear"]
print("apple" in basket)
print("kiwi" in basket)
if "pear" in basket:
    print("found pear")
