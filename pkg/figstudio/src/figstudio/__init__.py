"""figstudio: static figure rendering for coevonet sweep artifacts."""

from .manifest import ArtifactError, SweepArtifacts, TamperError
from .render import FIGURES, FigureJob, render

__version__ = "0.1.0"
