from rest_framework import serializers

from core.serializers import ComplexField


class ClaimSerializer(serializers.Serializer):
    kind = serializers.CharField()
    region = serializers.SerializerMethodField()
    expected = serializers.IntegerField(allow_null=True)
    text = serializers.CharField()

    def get_region(self, obj):
        return obj.region.to_dict()


class GalleryEntrySerializer(serializers.Serializer):
    name = serializers.CharField()
    parameters = serializers.SerializerMethodField()
    expectation = serializers.CharField()
    polynomial = serializers.SerializerMethodField()
    claims = serializers.SerializerMethodField()

    def get_parameters(self, obj):
        field = ComplexField()
        return {
            key: field.to_representation(value) if isinstance(value, complex) else value
            for key, value in obj.parameters.items()
        }

    def get_polynomial(self, obj):
        return obj.composer is not None

    def get_claims(self, obj):
        return ClaimSerializer(obj.claims(obj.parameters), many=True).data
