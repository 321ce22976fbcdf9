from lambert.equations import FormTag, solve
from lambert.serializers import EquationRequestSerializer, EquationSolutionSerializer, OutputFormat

from ._base import LambertCommand


class Command(LambertCommand):
    help = "Solve an equation that reduces to Lambert W; exits 2 when it has no real solution"
    request_serializer = EquationRequestSerializer
    request_fields = ("form", "m", "p", "q", "r", "s", "x")

    def add_arguments(self, parser):
        parser.add_argument("form", help=", ".join(f.value for f in FormTag))
        for name in ("m", "p", "q", "r", "s", "x"):
            parser.add_argument(f"--{name}")
        super().add_arguments(parser)

    def run(self, request):
        solution = solve(request.validated_data["equation"], request.cfg)
        document = EquationSolutionSerializer(solution).data
        if request.writer.fmt is OutputFormat.JSON:
            return request.writer.render_object(document)

        rows = [
            {
                "form": document["form"],
                "equation": document["equation"],
                "root": root,
                "branch": reduction["branch"],
                "argument": reduction["argument"],
                "w_value": reduction["w_value"],
                "residual": document["residual"],
            }
            for root, reduction in zip(document["roots"], document["reductions"])
        ]
        return request.writer.render_rows("equation", rows)
