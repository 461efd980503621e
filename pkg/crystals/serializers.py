# crystals/serializers.py
from rest_framework import serializers

from core.exceptions import InvalidStateError

from .codons import parse_codon
from .operators import CrystalTensorOp


class CodonRowSerializer(serializers.Serializer):
    codon = serializers.CharField()
    jh = serializers.CharField()
    jv = serializers.CharField()
    m3h = serializers.CharField()
    m3v = serializers.CharField()
    mult = serializers.IntegerField()
    vmc_aa = serializers.CharField()
    suc_aa = serializers.CharField()


class DinucleotideRowSerializer(serializers.Serializer):
    dinucleotide = serializers.CharField()
    jh = serializers.CharField()
    jv = serializers.CharField()
    m3h = serializers.CharField()
    m3v = serializers.CharField()
    jv_zero = serializers.BooleanField()
    lowest_weight_v = serializers.BooleanField()
    lowest_weight_h_nonzero_jh = serializers.BooleanField()
    unchanged_by_vertical_vector_op = serializers.BooleanField()
    b = serializers.IntegerField()
    alpha = serializers.IntegerField()
    beta = serializers.IntegerField()


class ConnectQuerySerializer(serializers.Serializer):
    source = serializers.CharField()
    target = serializers.CharField()
    op = serializers.CharField(help_text="Operator as 'rank_h,comp_h;rank_v,comp_v'")
    then = serializers.CharField(required=False, help_text='Second operator of a two-step substitution')

    def _codon(self, value):
        try:
            return parse_codon(value)
        except InvalidStateError as exc:
            raise serializers.ValidationError(str(exc))

    def _operator(self, value):
        try:
            return CrystalTensorOp.parse(value)
        except InvalidStateError as exc:
            raise serializers.ValidationError(str(exc))

    def validate_source(self, value):
        return self._codon(value)

    def validate_target(self, value):
        return self._codon(value)

    def validate_op(self, value):
        return self._operator(value)

    def validate_then(self, value):
        return self._operator(value)
