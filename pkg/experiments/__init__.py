"""Threshold searches, cost optimizations and the catalogue of parameter sweeps"""

from experiments.templates import *
from experiments.evaluate import *
from experiments.search import *
from experiments.cost import *
from experiments.sinks import *
from experiments.catalogue import *
