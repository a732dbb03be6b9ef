"""Local reduction data, cubic-ring invariants and a conductor census for
elliptic curves over Q with good reduction at 2 and 3."""

__version__ = "0.1.0"
