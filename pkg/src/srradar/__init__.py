from pathlib import Path
from .version import __version__

PROJECT_PATH = Path(__file__).parent

from .utils import add_srradar_yaml_representers

from src.srradar import core, scene, grid, sdp, certificate, bench

__all__ = [
    'add_srradar_yaml_representers',
    'core',
    'scene',
    'grid',
    'sdp',
    'certificate',
    'bench'
]
