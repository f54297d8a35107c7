"""
Serializers for contour reports
"""
from rest_framework import serializers


class ComplexField(serializers.Field):
    """A complex number as {"re": .., "im": ..}"""

    def to_representation(self, value):
        value = complex(value)
        return {"re": value.real, "im": value.imag}

    def to_internal_value(self, data):
        try:
            if isinstance(data, dict):
                return complex(float(data["re"]), float(data.get("im", 0.0)))
            return complex(data)
        except (KeyError, TypeError, ValueError):
            raise serializers.ValidationError("Expected a complex number or {re, im} object")


class LocalizedZeroSerializer(serializers.Serializer):
    re = serializers.FloatField(source="location.real")
    im = serializers.FloatField(source="location.imag")
    mult = serializers.IntegerField(source="multiplicity")
    residual = serializers.FloatField()
    resolved = serializers.BooleanField()


class ZeroReportSerializer(serializers.Serializer):
    region = serializers.SerializerMethodField()
    count = serializers.IntegerField()
    zeros = LocalizedZeroSerializer(many=True)
    boundary_min_modulus = serializers.FloatField()
    samples_used = serializers.IntegerField()
    adjustment = serializers.FloatField()
    requested_region = serializers.SerializerMethodField()
    notes = serializers.ListField(child=serializers.CharField())

    def get_region(self, obj):
        return obj.region.to_dict()

    def get_requested_region(self, obj):
        return obj.requested_region.to_dict() if obj.requested_region is not None else None
