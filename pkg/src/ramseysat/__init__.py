"""SAT-based search toolkit for Ramsey-type numbers."""
