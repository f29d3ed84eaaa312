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

from typing import Callable, Optional, List, Dict, Any
from common.exceptions import UsageError

import sys
import json
import argparse

__all__ = (
    'Command',
    'ArgumentParser',
    'json_object',
    'index_list',
    'add_model_arguments',
    'add_output_arguments',
    'emit_json',
)

Handler = Callable[..., int]


class ArgumentParser(argparse.ArgumentParser):
    """Raises :class:`UsageError` instead of exiting on bad arguments."""
    def error(self, message: str) -> None:  # type: ignore
        raise UsageError(message, hint=f'see {self.prog} --help')


class Command:
    """A subcommand: its name, help text, argument setup and handler.

    Commands are registered on the application like routes on a web app::

        validate = Command('validate', 'check a model file')

        @validate.arguments
        def _(parser): ...

        @validate.handler
        def run(args, model): ...
    """
    def __init__(self, name: str, help: str) -> None:
        self.name = name
        self.help = help
        self._configure: Optional[Callable[[argparse.ArgumentParser], None]] = None
        self._handler: Optional[Handler] = None

    def arguments(self, func: Callable[[argparse.ArgumentParser], None]) -> Callable[[argparse.ArgumentParser], None]:
        self._configure = func
        return func

    def handler(self, func: Handler) -> Handler:
        self._handler = func
        return func

    def register(self, subparsers: Any) -> None:
        parser = subparsers.add_parser(self.name, help=self.help, description=self.help)
        if self._configure is not None:
            self._configure(parser)
        parser.set_defaults(handler=self)

    def __call__(self, args: argparse.Namespace) -> int:
        if self._handler is None:
            raise RuntimeError(f'command {self.name!r} has no handler')
        return self._handler(args)


def json_object(value: str) -> Dict[str, Any]:
    """argparse type for ``--params '{"lam": 100}'``."""
    try:
        data = json.loads(value)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f'not valid JSON: {exc}') from None
    if not isinstance(data, dict):
        raise argparse.ArgumentTypeError('must be a JSON object')
    return data


def index_list(value: str) -> List[int]:
    """argparse type for comma separated 1-based indices, returned 0-based."""
    try:
        indices = [int(part) for part in value.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('must be comma separated integers') from None
    if any(index < 1 for index in indices):
        raise argparse.ArgumentTypeError('indices start at 1')
    return [index - 1 for index in indices]


def _population(value: str) -> List[int]:
    try:
        counts = [int(part) for part in value.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError('must be comma separated integers') from None
    if any(count < 0 for count in counts):
        raise argparse.ArgumentTypeError('populations must be nonnegative')
    return counts


def add_model_arguments(parser: argparse.ArgumentParser, *, initial: bool = False) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument('--model', metavar='FILE', help='JSON model file')
    source.add_argument('--template', metavar='NAME', help='build the model from a template')
    parser.add_argument('--params', type=json_object, default={}, metavar='JSON', help='template parameters')
    if initial:
        parser.add_argument('--population', type=_population, default=None, help='initial population, e.g. 0,0')
        parser.add_argument('--env', type=int, default=1, help='initial environment state (1-based)')


def add_output_arguments(parser: argparse.ArgumentParser, *, formats: tuple = ('json',)) -> None:
    parser.add_argument('--format', choices=formats, default=formats[0])
    parser.add_argument('--output', metavar='FILE', default=None, help='write here instead of standard output')


def emit_json(document: Any, output: Optional[str] = None) -> None:
    text = json.dumps(document, indent=2) + '\n'
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, 'w', encoding='utf-8') as fp:
            fp.write(text)
