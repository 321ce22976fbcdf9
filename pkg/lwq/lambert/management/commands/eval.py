from lambert.lambertw import lambert_w
from lambert.serializers import BranchResultSerializer, EvalRequestSerializer, OutputFormat

from ._base import LambertCommand


class Command(LambertCommand):
    help = "Evaluate W(x) on one branch; exits 2 outside the real domain, 3 without convergence"
    request_serializer = EvalRequestSerializer
    request_fields = ("x",)

    def add_arguments(self, parser):
        parser.add_argument("x", help="Argument, e.g. 1e20, 10^20 or -0.1")
        super().add_arguments(parser)

    def run(self, request):
        data = request.validated_data
        result = lambert_w(data["x"], request.branch, request.cfg, request.method)
        document = BranchResultSerializer(result, include_trace=data["trace"]).data

        if request.writer.fmt is OutputFormat.CSV and data["trace"]:
            head = {key: document[key] for key in ("x", "branch", "method")}
            return request.writer.render_rows("eval", [{**head, **step} for step in document["trace"]])
        return request.writer.render_object(document, list_key="trace")
