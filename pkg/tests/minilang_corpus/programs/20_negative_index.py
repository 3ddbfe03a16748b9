word = "python"
print(word[-1], word[-3])
nums = [10, 20, 30]
print(nums[-2])
