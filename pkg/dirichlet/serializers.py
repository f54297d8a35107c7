"""
JSON descriptions of general Dirichlet series

    {"terms": [{"a_re": .., "a_im": .., "lambda": ..}], "tail": {"A": .., "Lambda": ..}}
    {"ordinary": {"coeffs": [...], "shift": .., "growth": {"C": .., "theta": ..}}}
"""
from rest_framework import serializers

from core.exceptions import ParseError, ZetaLabError
from core.serializers import ComplexField
from dirichlet.series import GeneralDirichletSeries, make_ordinary
from dirichlet.tails import EXACT, TailMajorant


class TermSerializer(serializers.Serializer):
    a_re = serializers.FloatField()
    a_im = serializers.FloatField(default=0.0)

    def get_fields(self):
        fields = super().get_fields()
        fields["lambda"] = serializers.FloatField()
        return fields


class TailSerializer(serializers.Serializer):
    A = serializers.FloatField(min_value=0.0)
    Lambda = serializers.FloatField()
    abscissa = serializers.FloatField(default=0.5)
    heuristic = serializers.BooleanField(default=False)


class GrowthSerializer(serializers.Serializer):
    C = serializers.FloatField(min_value=0.0)
    theta = serializers.FloatField()


class OrdinarySerializer(serializers.Serializer):
    coeffs = serializers.ListField(child=ComplexField(), allow_empty=False)
    shift = serializers.FloatField(default=0.0)
    growth = GrowthSerializer(required=False)


class SeriesInputSerializer(serializers.Serializer):
    terms = TermSerializer(many=True, required=False)
    tail = TailSerializer(required=False, allow_null=True)
    ordinary = OrdinarySerializer(required=False)

    def validate(self, attrs):
        if ("terms" in attrs) == ("ordinary" in attrs):
            raise serializers.ValidationError("exactly one of 'terms' or 'ordinary' is required")
        return attrs


class SeriesSerializer(serializers.Serializer):
    """Output form of a GeneralDirichletSeries"""

    terms = serializers.SerializerMethodField()
    tail = serializers.SerializerMethodField()
    label = serializers.CharField()

    def get_terms(self, obj):
        return [{"a_re": a.real, "a_im": a.imag, "lambda": lam} for a, lam in obj.terms]

    def get_tail(self, obj):
        if obj.is_exact:
            return None
        if isinstance(obj.tail, TailMajorant):
            return obj.tail.to_dict()
        # Composite tails (sums, products, derivatives) have no closed form
        return {"composite": True, "heuristic": bool(obj.tail.heuristic)}


def series_from_dict(data: dict) -> GeneralDirichletSeries:
    """
    Validate and build a series from its JSON description

    Raises:
        ParseError: the payload does not match either schema
    """
    serializer = SeriesInputSerializer(data=data)
    if not serializer.is_valid():
        raise ParseError(f"Invalid series description: {serializer.errors}")
    attrs = serializer.validated_data
    try:
        if "ordinary" in attrs:
            spec = attrs["ordinary"]
            growth = spec.get("growth")
            return make_ordinary(
                spec["coeffs"],
                shift=spec["shift"],
                growth=(growth["C"], growth["theta"]) if growth else None,
            )
        tail_data = attrs.get("tail")
        tail = EXACT
        if tail_data:
            tail = TailMajorant(tail_data["A"], tail_data["Lambda"], tail_data["abscissa"], tail_data["heuristic"])
        terms = [(complex(t["a_re"], t["a_im"]), t["lambda"]) for t in attrs["terms"]]
        return GeneralDirichletSeries.from_terms(terms, tail=tail)
    except ZetaLabError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"Invalid series description: {exc}") from exc
