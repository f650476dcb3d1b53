"""Beta-numeration for quadratic Pisot numbers."""
