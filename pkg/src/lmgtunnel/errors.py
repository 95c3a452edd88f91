class NumericsError(RuntimeError):
    """A numerical procedure failed: non-convergence, a missing feature on a
    grid, a violated consistency bound, or an eigensolver breakdown."""
