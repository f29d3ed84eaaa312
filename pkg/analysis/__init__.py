"""Transient and stationary first moments, stability and performance metrics"""

from analysis.stability import *
from analysis.moments import *
from analysis.metrics import *
