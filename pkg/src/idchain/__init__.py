"""IdentityChain identity layer: anonymous credentials, threshold reveal, governance boards."""

__version__ = "0.1.0"
