"""Command line subcommands"""

from commands.validate import *
from commands.analyze import *
from commands.simulate import *
from commands.search import *
from commands.experiment import *
from commands.matrices import *
from commands.build import *
