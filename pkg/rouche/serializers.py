"""
JSON form of Rouche certificates (one object per line in scan files)
"""
from rest_framework import serializers

from core.serializers import ComplexField, LocalizedZeroSerializer


class RoucheCertificateSerializer(serializers.Serializer):
    tau = serializers.FloatField()
    disk = serializers.SerializerMethodField()
    max_diff = serializers.FloatField()
    min_target = serializers.FloatField()
    samples = serializers.IntegerField()
    winding_Z = serializers.IntegerField(allow_null=True)
    winding_A = serializers.IntegerField(allow_null=True)
    zero_inside = LocalizedZeroSerializer(allow_null=True)
    mapped_zero = ComplexField(allow_null=True)
    verified = serializers.BooleanField(allow_null=True)
    notes = serializers.ListField(child=serializers.CharField())

    def get_fields(self):
        fields = super().get_fields()
        fields["pass"] = serializers.BooleanField(source="passed")
        return fields

    def get_disk(self, obj):
        return obj.disk.to_dict()
