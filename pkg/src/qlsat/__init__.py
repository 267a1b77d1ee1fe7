"""Three quantum-logic semantics for {~, &, |} over F^d, in exact arithmetic."""

__version__ = "0.1.0"
