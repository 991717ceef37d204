"""Configuration package for latgame."""
from latgame.config.settings import *
