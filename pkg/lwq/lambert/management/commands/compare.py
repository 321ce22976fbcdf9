from lambert.serializers import CompareRequestSerializer
from lambert.tasks import compare_row_task, config_payload, gather

from ._base import LambertCommand


class Command(LambertCommand):
    help = "Compare the quadratic method with Newton and Halley iterations"
    request_serializer = CompareRequestSerializer
    request_fields = ("xs",)

    def add_arguments(self, parser):
        parser.add_argument("xs", help="Comma-separated arguments, e.g. 1,100,1e20")
        super().add_arguments(parser)

    def run(self, request):
        data = request.validated_data
        config = config_payload(request.cfg)
        rows = gather([compare_row_task.s(x, data["branch"], config) for x in data["xs"]])
        return request.writer.render_rows("compare", rows)
