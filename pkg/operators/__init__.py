# Operators package
