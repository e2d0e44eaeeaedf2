from enum import Enum

class OutputFormat(Enum):
    TEXT = 'text'
    JSON = 'json'
    CSV = 'csv'

class EnumerationMode(Enum):
    POSDEF = 'posdef'
    NEGDEF = 'negdef'

class SearchEngine(Enum):
    INCREMENTAL = 'incremental'
    LITERAL = 'literal'

class CheckStatus(Enum):
    OK = 'OK'
    FAIL = 'FAIL'
    NOTE = 'NOTE'
