from rest_framework import generics
from rest_framework.permissions import AllowAny

from core.utils import error_response, success_response

from .codons import codon_table, dinucleotide_table, table_mismatches
from .operators import apply_op, connects, connects_sequential, virtual_state
from .serializers import CodonRowSerializer, ConnectQuerySerializer, DinucleotideRowSerializer


class CodonTableView(generics.GenericAPIView):
    """
    Computed crystal labels of the 64 codons with their amino acids in both codes.
    """
    permission_classes = [AllowAny]
    serializer_class = CodonRowSerializer

    def get(self, request):
        serializer = self.get_serializer(codon_table(), many=True)
        return success_response(data={
            'codons': serializer.data,
            'reference_mismatches': len(table_mismatches()),
        })


class DinucleotideTableView(generics.GenericAPIView):
    permission_classes = [AllowAny]
    serializer_class = DinucleotideRowSerializer

    def get(self, request):
        serializer = self.get_serializer(dinucleotide_table(), many=True)
        return success_response(data={'dinucleotides': serializer.data})


class ConnectView(generics.GenericAPIView):
    """
    Whether an operator (or a pair of operators) carries one codon onto another.
    """
    permission_classes = [AllowAny]
    serializer_class = ConnectQuerySerializer

    def get(self, request):
        serializer = self.get_serializer(data=request.query_params)
        if not serializer.is_valid():
            return error_response(message='Invalid query parameters', details=serializer.errors)
        params = serializer.validated_data
        source, target, op = params['source'], params['target'], params['op']
        second = params.get('then')
        if second is None:
            result = apply_op(source, op)
            allowed = connects(source, op, target)
            steps = {'op': str(op)}
        else:
            result = virtual_state(source, op)
            allowed = connects_sequential(source, op, second, target)
            steps = {'op': str(op), 'then': str(second)}
        return success_response(data={
            'source': source,
            'target': target,
            **steps,
            'reached': None if result.is_vanishing else result.labels.as_dict(),
            'allowed': allowed,
        })
