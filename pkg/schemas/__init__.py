"""Marshmallow schemas for model files, experiment specs, threshold queries and simulation configs."""

from schemas.network import *
from schemas.experiments import *
