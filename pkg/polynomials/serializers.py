"""
Polynomial JSON schema: {"l": 2, "terms": [{"deg": [1, 0, 1], "coeff": <series JSON>}]}
"""
from rest_framework import serializers

from core.exceptions import ParseError
from dirichlet.serializers import series_from_dict
from polynomials.composer import DirichletPolynomial


class PolynomialTermSerializer(serializers.Serializer):
    deg = serializers.ListField(child=serializers.IntegerField(min_value=0), allow_empty=False)
    coeff = serializers.DictField()


class PolynomialInputSerializer(serializers.Serializer):
    l = serializers.IntegerField(min_value=0)  # noqa: E741
    terms = PolynomialTermSerializer(many=True, allow_empty=False)

    def validate(self, attrs):
        width = attrs["l"] + 1
        for term in attrs["terms"]:
            if len(term["deg"]) != width:
                raise serializers.ValidationError(f"every deg must have l+1 = {width} entries")
        return attrs


class PolynomialSerializer(serializers.Serializer):
    l = serializers.IntegerField()  # noqa: E741
    terms = serializers.SerializerMethodField()

    def get_terms(self, obj):
        return [{"deg": list(degree), "coeff": coeff.to_dict()} for degree, coeff in obj.terms.items()]


def polynomial_from_dict(data: dict) -> DirichletPolynomial:
    """
    Raises:
        ParseError: invalid payload
    """
    serializer = PolynomialInputSerializer(data=data)
    if not serializer.is_valid():
        raise ParseError(f"Invalid polynomial description: {serializer.errors}")
    attrs = serializer.validated_data
    terms = {}
    for term in attrs["terms"]:
        degree = tuple(term["deg"])
        if degree in terms:
            raise ParseError(f"duplicate degree {list(degree)}")
        terms[degree] = series_from_dict(term["coeff"])
    return DirichletPolynomial(attrs["l"] + 1, terms)
