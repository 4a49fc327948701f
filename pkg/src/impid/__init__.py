"""impid: impermanent identifiers — context-dependent display forms for
source-code identifiers, rendered without modifying the underlying source."""

__version__ = "0.1.0"
