__all__ = [
    "errors",
    "config",
    "poset",
    "intersect",
    "build",
    "census",
    "counting",
    "classify",
    "io",
    "selftest",
    "app",
]
