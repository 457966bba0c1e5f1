"""Read-only loader for graph benchmark dataset bundles."""

from .loader import BundleValidationError, LoadedDataset, load, split_views

__all__ = ["BundleValidationError", "LoadedDataset", "load", "split_views"]
