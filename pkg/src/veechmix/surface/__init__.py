"""Translation surfaces: data model, unfolding, builders and SVG output."""

from .model import ConePoint, Pairing, TranslationSurface

__all__ = ["ConePoint", "Pairing", "TranslationSurface"]
