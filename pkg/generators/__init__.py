# Generators package
