"""Services for representation computations, exact structures and law checks."""
