"""DefCoh Utilities - exact linear algebra over sympy domains."""
