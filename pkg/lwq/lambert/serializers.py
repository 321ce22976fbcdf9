import math
import re
from enum import Enum

from django.conf import settings
from rest_framework import serializers

from .core_iteration import SolveConfig
from .equations import DESCRIPTIONS, PARAMETERS, EquationForm, FormTag
from .lambertw import Branch, Method
from .reference_tables import TableId

class OutputFormat(str, Enum):
    TEXT = "text"
    CSV = "csv"
    JSON = "json"

    @classmethod
    def parse(cls, value: str) -> "OutputFormat":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"Invalid format: {value}. Must be 'text', 'csv', or 'json'") from None


SIGNIFICANT_DIGITS = 12

_POWER = re.compile(r"^([+-]?)(\d+(?:\.\d*)?)\^([+-]?\d+)$")


def parse_number(text: str) -> float:
    """
    Parse a decimal, ``1e20`` or ``10^20`` style number.

    Raises:
        ValueError: If the text is not a finite number
    """
    text = text.strip()
    match = _POWER.match(text)
    try:
        if match:
            sign, base, exponent = match.groups()
            value = float(base) ** int(exponent)
            if sign == "-":
                value = -value
        else:
            value = float(text)
    except OverflowError as e:
        raise ValueError(f"{text} is outside double range") from e
    if not math.isfinite(value):
        raise ValueError(f"{text} is not a finite number")
    return value


def round_significant(value):
    """12 significant digits; non-finite values become None."""
    if value is None:
        return None
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


class NumberField(serializers.FloatField):
    """Float that reads ``10^k`` input and writes 12 significant digits."""

    def to_internal_value(self, data):
        try:
            if isinstance(data, str):
                return parse_number(data)
            value = float(data)
        except (TypeError, ValueError):
            self.fail("invalid")
        if not math.isfinite(value):
            self.fail("invalid")
        return value

    def to_representation(self, value):
        return round_significant(value)


class NumberListField(serializers.ListField):
    child = NumberField()

    def to_internal_value(self, data):
        if isinstance(data, str):
            data = [item.strip() for item in data.split(",")]
            if any(item == "" for item in data):
                raise serializers.ValidationError("Expected a comma-separated list of numbers.")
        return super().to_internal_value(data)


class CommonOptionsSerializer(serializers.Serializer):
    branch = serializers.ChoiceField(choices=[b.value for b in Branch], default=Branch.PRINCIPAL.value)
    method = serializers.ChoiceField(choices=[m.value for m in Method], default=Method.M1.value)
    format = serializers.CharField(required=False, allow_null=True, default=None)
    trace = serializers.BooleanField(default=False)
    seed = NumberField(required=False, allow_null=True, default=None)
    iters = serializers.IntegerField(required=False, allow_null=True, default=None, min_value=1)
    tol = NumberField(required=False, allow_null=True, default=None)

    def validate_format(self, value):
        try:
            return OutputFormat.parse(value or settings.LWQ_FORMAT)
        except ValueError as e:
            raise serializers.ValidationError(str(e)) from e

    def validate_seed(self, value):
        if value is not None and not value > 0:
            raise serializers.ValidationError("Seed must be > 0.")
        return value

    def validate_tol(self, value):
        if value is not None and not value > 0:
            raise serializers.ValidationError("Tolerance must be > 0.")
        return value

    def solve_config(self) -> SolveConfig:
        data = self.validated_data
        try:
            return SolveConfig.from_settings(
                tol_rel=data.get("tol"),
                seed_override=data.get("seed"),
                fixed_iters=data.get("iters"),
                record_trace=data.get("trace", False),
            )
        except ValueError as e:
            raise serializers.ValidationError(str(e)) from e

    @property
    def branch(self) -> Branch:
        return Branch(self.validated_data["branch"])

    @property
    def method(self) -> Method:
        return Method(self.validated_data["method"])


class EvalRequestSerializer(CommonOptionsSerializer):
    x = NumberField()


class TablesRequestSerializer(CommonOptionsSerializer):
    table = serializers.ChoiceField(choices=[t.value for t in TableId])


class SweepRequestSerializer(CommonOptionsSerializer):
    x = NumberField()
    seeds = NumberListField(min_length=1, help_text="Comma-separated seeds")

    def validate_seeds(self, value):
        if any(not seed > 0 for seed in value):
            raise serializers.ValidationError("Every seed must be > 0.")
        return value


class CompareRequestSerializer(CommonOptionsSerializer):
    xs = NumberListField(min_length=1, help_text="Comma-separated arguments")


class EquationRequestSerializer(CommonOptionsSerializer):
    form = serializers.ChoiceField(choices=[f.value for f in FormTag])
    m = NumberField(required=False)
    p = NumberField(required=False)
    q = NumberField(required=False)
    r = NumberField(required=False)
    s = NumberField(required=False)
    x = NumberField(required=False)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        tag = FormTag(attrs["form"])
        missing = [name for name in PARAMETERS[tag] if name not in attrs]
        if missing:
            raise serializers.ValidationError(
                f"{tag.value} needs --{' --'.join(missing)}"
            )
        params = {name: attrs[name] for name in PARAMETERS[tag]}
        try:
            attrs["equation"] = EquationForm(tag, params)
        except ValueError as e:
            raise serializers.ValidationError(str(e)) from e
        return attrs


class IterationStepSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    iterate = NumberField()
    l = NumberField(source="coeffs.l", allow_null=True)
    m = NumberField(source="coeffs.m", allow_null=True)
    a = NumberField(source="correction")
    residual = NumberField()


class BranchResultSerializer(serializers.Serializer):
    x = NumberField()
    branch = serializers.CharField(source="branch.value")
    method = serializers.CharField(source="method.value")
    value = NumberField()
    iterations = serializers.IntegerField()
    residual = NumberField()
    error_estimate_pct = NumberField()
    status = serializers.CharField(source="status.value")
    seed = NumberField()
    attempts = serializers.IntegerField()
    trace = IterationStepSerializer(many=True, source="trace.steps")

    def __init__(self, *args, include_trace=False, **kwargs):
        super().__init__(*args, **kwargs)
        if not include_trace:
            self.fields.pop("trace")


class SweepRowSerializer(serializers.Serializer):
    x = NumberField()
    branch = serializers.CharField(source="branch.value")
    method = serializers.CharField(source="method.value")
    seed = NumberField()
    status = serializers.CharField(source="status.value")
    iterations = serializers.IntegerField()
    attempts = serializers.IntegerField()
    value = NumberField()
    residual = NumberField()


class ComparisonRowSerializer(serializers.Serializer):
    x = NumberField()
    branch = serializers.CharField(source="branch.value")
    quad_iters = serializers.IntegerField()
    newton_iters = serializers.IntegerField()
    halley_iters = serializers.IntegerField()
    quad_value = NumberField()
    newton_value = NumberField()
    halley_value = NumberField()
    agreement = NumberField()
    quad_status = serializers.CharField(source="quad_status.value")
    newton_status = serializers.CharField(source="newton_status.value")
    halley_status = serializers.CharField(source="halley_status.value")
    quad_order = NumberField(allow_null=True)


class ReductionSerializer(serializers.Serializer):
    argument = NumberField()
    log_argument = NumberField(allow_null=True)
    branch = serializers.CharField(source="branch.value")
    w_value = NumberField()


class EquationSolutionSerializer(serializers.Serializer):
    form = serializers.CharField(source="form.tag.value")
    equation = serializers.SerializerMethodField()
    roots = serializers.ListField(child=NumberField())
    reductions = ReductionSerializer(many=True)
    residual = NumberField()

    def get_equation(self, solution):
        return DESCRIPTIONS[solution.form.tag]
