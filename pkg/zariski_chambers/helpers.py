import logging
import os
from fractions import Fraction
from typing import Iterable, List, Sequence

import chardet

from .exactalg import IntSymMatrix, InvalidArgumentError, parse_matrix_text

logger = logging.getLogger('zariski_chambers')

HOMEDIR = os.path.expanduser('~')


def get_config_path() -> str:
    config_path = os.path.join(HOMEDIR, '.zariski-chambers')
    if not os.path.exists(config_path):
        os.makedirs(config_path)
    return config_path


def chunks(lst: Sequence, n: int) -> Iterable[Sequence]:
    """Yield successive n-sized chunks from lst."""
    for i in range(0, len(lst), n):
        yield lst[i:i + n]


def load_matrix_file(file_path: str) -> IntSymMatrix:
    logger.info('Loading matrix from file: %s', file_path)
    with open(file_path, 'rb') as f:
        rawdata = f.read()

    charenc = chardet.detect(rawdata)['encoding'] or 'utf-8'
    try:
        text = rawdata.decode(charenc)
    except (LookupError, UnicodeDecodeError):
        text = rawdata.decode('utf-8', errors='replace')

    matrix = parse_matrix_text(text)
    logger.info('Loaded %sx%s matrix', matrix.n, matrix.n)
    return matrix


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f'{value.numerator}/{value.denominator}'


def parse_labels(spec: str) -> List[str]:
    labels = [label.strip() for label in spec.split(',') if label.strip() != '']
    if not labels:
        raise InvalidArgumentError('empty support')
    return labels


def parse_int_list(spec: str) -> List[int]:
    """Parse ``"3,1,1"`` into integers, used for ``--ample d,m1,...,mr``."""
    try:
        return [int(value) for value in spec.replace(';', ',').split(',') if value.strip() != '']
    except ValueError:
        raise InvalidArgumentError(f'expected comma-separated integers, got {spec!r}') from None
