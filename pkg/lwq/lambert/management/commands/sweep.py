from lambert.serializers import SweepRequestSerializer
from lambert.tasks import config_payload, gather, sweep_row_task

from ._base import LambertCommand


class Command(LambertCommand):
    help = "Solve once per seed; failed seeds are reported as rows, not errors"
    request_serializer = SweepRequestSerializer
    request_fields = ("x", "seeds")

    def add_arguments(self, parser):
        parser.add_argument("x", help="Argument")
        parser.add_argument("--seeds", required=True, help="Comma-separated seeds, e.g. 1,10,1e4,1e12")
        super().add_arguments(parser)

    def run(self, request):
        data = request.validated_data
        config = config_payload(request.cfg)
        rows = gather(
            [
                sweep_row_task.s(data["x"], seed, data["method"], data["branch"], config)
                for seed in data["seeds"]
            ]
        )
        return request.writer.render_rows("sweep", rows)
