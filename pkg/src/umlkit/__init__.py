"""umlkit: a gamified grading engine for UML use case diagram exercises."""

__version__ = "0.1.0"
