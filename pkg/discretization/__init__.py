# Discretization package
