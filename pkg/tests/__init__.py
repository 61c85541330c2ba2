# qci test package
