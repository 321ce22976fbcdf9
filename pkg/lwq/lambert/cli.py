"""
``lwq`` console entry point.

Dispatches ``lwq <command> ...`` to the lambert management commands without
going through manage.py, so the only exit codes are 0, 2, 3 and 64.
"""
import os
import sys

COMMANDS = ("eval", "tables", "sweep", "compare", "equation")
EXIT_USAGE = 64

USAGE = (
    "usage: lwq <eval|tables|sweep|compare|equation> [args] [--branch w0|wm1] "
    "[--method m1|m2] [--format text|csv|json] [--trace] [--seed S] [--iters N] [--tol T]\n"
)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "lwq.settings")

    import django
    from django.core.management import load_command_class
    from django.core.management.base import CommandError

    django.setup()

    if not argv or argv[0] not in COMMANDS:
        sys.stderr.write(USAGE)
        return EXIT_USAGE

    name = argv[0]
    command = load_command_class("lambert", name)
    try:
        # CommandErrors raised while handling exit from inside run_from_argv
        command.run_from_argv(["lwq", name, *argv[1:]])
    except CommandError as e:
        sys.stderr.write(f"Error: {e}\n")
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
