# misreading/serializers.py
from rest_framework import serializers

from core.utils import parse_flag
from crystals.codons import GENETIC_CODES

from .catalog import FAMILY_INDEX, LEVELS, Scheme
from .multiplets import SER_TRIGGER_MODES


class FlagField(serializers.Field):
    """Accepts on/off, true/false, 1/0."""

    def to_internal_value(self, data):
        try:
            return parse_flag(data)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))

    def to_representation(self, value):
        return 'on' if value else 'off'


class SchemeQuerySerializer(serializers.Serializer):
    scheme = serializers.ChoiceField(choices=[scheme.value for scheme in Scheme], required=False)
    damping = FlagField(required=False)
    ser_trigger = serializers.ChoiceField(choices=SER_TRIGGER_MODES, required=False)

    def config_overrides(self):
        return {key: self.validated_data.get(key) for key in ('scheme', 'damping', 'ser_trigger')}


class DeriveQuerySerializer(SchemeQuerySerializer):
    level = serializers.IntegerField(min_value=min(LEVELS), max_value=max(LEVELS), default=max(LEVELS))
    annotate = FlagField(required=False, default=False)


class SubstitutionQuerySerializer(SchemeQuerySerializer):
    level = serializers.IntegerField(min_value=min(LEVELS), max_value=max(LEVELS))
    family = serializers.CharField(required=False)
    which = serializers.ChoiceField(choices=['allowed', 'forbidden'], default='allowed')

    def validate(self, attrs):
        family = attrs.get('family')
        if family:
            if family not in FAMILY_INDEX:
                raise serializers.ValidationError({'family': f"Unknown substitution family {family!r}"})
            if FAMILY_INDEX[family].level != attrs['level']:
                raise serializers.ValidationError(
                    {'family': f"{family} belongs to level {FAMILY_INDEX[family].level}"}
                )
        return attrs


class DiffQuerySerializer(SchemeQuerySerializer):
    table = serializers.ChoiceField(choices=sorted(GENETIC_CODES), default='vmc')
    level = serializers.IntegerField(min_value=min(LEVELS), max_value=max(LEVELS), default=max(LEVELS))


class CountQuerySerializer(serializers.Serializer):
    candidate = FlagField(required=False, default=False)
