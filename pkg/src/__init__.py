# Quantum complete intersection toolkit
