from django.core.management.base import CommandError

from lambert.reference_tables import (
    FIGDATA_COLUMNS,
    FIGDATA_XS,
    TABLE_COLUMNS,
    TableId,
    rows_for,
)
from lambert.serializers import TablesRequestSerializer
from lambert.tasks import config_payload, figure_task, gather, table_row_task

from ._base import EXIT_CONVERGENCE, LambertCommand


class Command(LambertCommand):
    help = "Recompute a published reference table next to its printed values"
    request_serializer = TablesRequestSerializer
    request_fields = ("table",)

    def add_arguments(self, parser):
        parser.add_argument("table", help=", ".join(t.value for t in TableId))
        super().add_arguments(parser)

    def run(self, request):
        table = TableId(request.validated_data["table"])
        config = config_payload(request.cfg)

        if table is TableId.FIGDATA:
            groups = gather([figure_task.s(x, config) for x in FIGDATA_XS])
            rows = [row for rows in groups for row in rows]
            return request.writer.render_rows("tables", rows, FIGDATA_COLUMNS)

        rows = gather(
            [table_row_task.s(table.value, index, config) for index in range(len(rows_for(table)))]
        )
        failed = [row for row in rows if "error" in row]
        columns = TABLE_COLUMNS + (("error",) if failed else ())
        document = request.writer.render_rows("tables", rows, columns)
        if failed:
            self.stdout.write(document, ending="")
            raise CommandError(
                f"{len(failed)} row(s) of {table.value} did not converge",
                returncode=EXIT_CONVERGENCE,
            )
        return document
