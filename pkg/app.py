# MIT License

# Copyright (c) 2023 Izhar Ahmad

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

from __future__ import annotations

from typing import Optional, Sequence
from dotenv import load_dotenv
from common.exceptions import LapisFlowError
from common import utils
from commands.base import ArgumentParser

import sys
import json
import logging
import commands

__all__ = (
    'app',
    'main',
)

COMMANDS = (
    commands.validate,
    commands.analyze,
    commands.simulate,
    commands.search,
    commands.experiment,
    commands.dump_matrices,
    commands.build,
)


def app() -> ArgumentParser:
    """The argument parser with every subcommand registered."""
    parser = ArgumentParser(prog='lapis-flow', description='Moments of Markov-modulated infinite-server networks')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='log more; repeat for debug output')
    parser.add_argument('--debug', action='store_true', default=None, help='log tracebacks of failed commands')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def _configure_logging(verbose: int, debug: bool) -> None:
    level = utils.get_env_var('LOG_LEVEL', 'WARNING').upper()
    if verbose == 1:
        level = 'INFO'
    if verbose > 1 or debug:
        level = 'DEBUG'
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    try:
        args = app().parse_args(argv)
    except LapisFlowError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), indent=2) + '\n')
        return exc.exit_code

    if args.debug is None:
        args.debug = utils.get_env_var('DEBUG', False, boolean=True)
    _configure_logging(args.verbose, args.debug)
    return args.handler(args)


if __name__ == '__main__':
    sys.exit(main())
