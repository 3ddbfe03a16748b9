nums = [1, 2, 3]
nums.remove(4)
