"""
Colored terminal banners for the outcome of robpgen runs.

Classes:
    Colors: ANSI color codes from `colorama`.
    Banner: Prints a full-width banner line, a centered message and another banner line,
            colored by outcome (success, error, info, warning).
"""

import shutil
from typing import Tuple

import colorama

colorama.init()


class Colors:
    """
    Color constants for the banner kinds.

    Methods:
        get_color(kind: str) -> str:
            Returns the color of a banner kind; white for unknown kinds.
    """
    red     = colorama.Fore.RED
    green   = colorama.Fore.GREEN
    yellow  = colorama.Fore.YELLOW
    cyan    = colorama.Fore.CYAN
    white   = colorama.Fore.WHITE
    reset   = colorama.Style.RESET_ALL

    _by_kind = {
        'success': green,
        'error': red,
        'info': cyan,
        'warning': yellow,
    }

    @staticmethod
    def get_color(kind: str) -> str:
        return Colors._by_kind.get(kind, Colors.white)


class Banner:
    """
    Terminal banners marking the end of an audit, a check or an experiment.

    Attributes:
        style (str): The character used for the banner lines (default is '-').
    """

    def __init__(self, style: str = '-'):
        self.style = style

    def _fill_term(self, message: str) -> Tuple[str, str]:
        """
        Banner line and centered message for the current terminal width.

        Args:
            message (str): The message to be displayed in the banner.

        Returns:
            Tuple[str, str]: The line of `style` characters and the centered message.
        """
        term_size = shutil.get_terminal_size((80, 20)).columns
        width = max(term_size, len(message))
        return self.style * width, message.center(width, ' ')

    def render(self, kind: str, message: str) -> str:
        color = Colors.get_color(kind)
        lines, msg = self._fill_term(message=message or kind.upper())
        formatted_lines = f'{color}{lines}{Colors.reset}'
        return f'{formatted_lines}\n{color}{msg}{Colors.reset}\n{formatted_lines}'

    @staticmethod
    def _format(func):
        """Turns a method returning a message into one that prints it as a banner."""
        def wrapper(self, message: str = ''):
            print(self.render(func.__name__, func(self, message)))
        return wrapper

    @_format
    def success(self, message='SUCCESS'):
        return message

    @_format
    def error(self, message='ERROR'):
        return message

    @_format
    def info(self, message='INFO'):
        return message

    @_format
    def warning(self, message='WARNING'):
        return message

    def outcome(self, passed: bool, message: str) -> None:
        """Success banner when passed, error banner otherwise."""
        if passed:
            self.success(message)
        else:
            self.error(message)
