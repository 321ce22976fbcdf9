"""
Shared plumbing for the lwq commands: the common options, request
validation through the DRF serializers, and the exit-code mapping.
"""
from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from lambert.exceptions import ConvergenceError, DomainError
from lambert.writers import DocumentWriter

EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3
EXIT_USAGE = 64

COMMON_OPTIONS = ("branch", "method", "format", "trace", "seed", "iters", "tol")


def _flatten_errors(detail) -> str:
    if isinstance(detail, dict):
        parts = []
        for field, errors in detail.items():
            message = _flatten_errors(errors)
            parts.append(message if field == "non_field_errors" else f"{field}: {message}")
        return "; ".join(parts)
    if isinstance(detail, list):
        return " ".join(_flatten_errors(item) for item in detail)
    return str(detail)


class LambertCommand(BaseCommand):
    requires_system_checks = []
    request_serializer = None
    # Request fields read from the parsed arguments besides COMMON_OPTIONS
    request_fields = ()

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # argparse errors surface as CommandError so the entry point can map them to 64
        parser.called_from_command_line = False
        return parser

    def add_arguments(self, parser):
        parser.add_argument("--branch", help="w0 (principal, default) or wm1 (secondary)")
        parser.add_argument("--method", help="m1 (default), m2, newton or halley")
        parser.add_argument("--format", help="text, csv or json (default: LWQ_FORMAT)")
        parser.add_argument("--trace", action="store_true", help="Include the per-iteration trace")
        parser.add_argument("--seed", help="Initial iterate tried first")
        parser.add_argument("--iters", help="Apply exactly N corrections")
        parser.add_argument("--tol", help="Relative step tolerance")

    def validated(self, options):
        data = {
            key: options[key]
            for key in COMMON_OPTIONS + tuple(self.request_fields)
            if options.get(key) is not None
        }
        request = self.request_serializer(data=data)
        try:
            request.is_valid(raise_exception=True)
            request.cfg = request.solve_config()
        except serializers.ValidationError as e:
            raise CommandError(_flatten_errors(e.detail), returncode=EXIT_USAGE) from e
        request.writer = DocumentWriter(request.validated_data["format"])
        return request

    def handle(self, *args, **options):
        try:
            return self.run(self.validated(options))
        except DomainError as e:
            raise CommandError(str(e), returncode=EXIT_DOMAIN) from e
        except ConvergenceError as e:
            raise CommandError(str(e), returncode=EXIT_CONVERGENCE) from e

    def run(self, request) -> str:
        raise NotImplementedError
