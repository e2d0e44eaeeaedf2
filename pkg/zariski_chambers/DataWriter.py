import csv
import logging
import os
from typing import List

from openpyxl import Workbook
from slugify import slugify

logger = logging.getLogger('zariski_chambers')


class DataWriter:
    """Tabular export: one table per ``create_table`` call, rows as dicts keyed by header."""

    def __init__(self, file_path: str):
        self.output_dir, file_name = os.path.split(os.path.abspath(file_path))
        self.base_name, self.extension = os.path.splitext(file_name)
        self.tables = {}
        if not os.path.exists(self.output_dir):
            os.makedirs(self.output_dir)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.close()

    def close(self) -> None:
        pass

    def create_table(self, headers: List[str], name: str) -> None:
        if name in self.tables:
            raise ValueError(f'Table "{name}" already exists!')

    def add_row(self, values: dict, table_name: str) -> None:
        self.add_rows([values], table_name)

    def add_rows(self, values: List[dict], table_name: str) -> None:
        pass


class CsvWriter(DataWriter):
    """The first table goes to the requested path, later ones get a slugified suffix."""

    def close(self) -> None:
        for table in self.tables.values():
            table['file'].close()
            logger.info('Table stored in file: %s', table['file_name'])

    def create_table(self, headers: List[str], name: str) -> None:
        super().create_table(headers, name)
        suffix = '' if not self.tables else f'-{slugify(name)}'
        file_name = os.path.join(self.output_dir, f'{self.base_name}{suffix}{self.extension or ".csv"}')

        output_file = open(file_name, 'w', newline='', encoding='utf-8')
        writer = csv.writer(output_file, delimiter=',', quotechar='"', quoting=csv.QUOTE_MINIMAL)
        writer.writerow(headers)
        self.tables[name] = {
            'headers': headers,
            'file_name': file_name,
            'file': output_file,
            'writer': writer,
        }

    def add_rows(self, values: List[dict], table_name: str) -> None:
        table = self.tables[table_name]
        table['writer'].writerows([[row.get(header, '') for header in table['headers']] for row in values])


class XlsxWriter(DataWriter):
    """One worksheet per table in a write-only workbook."""

    def __init__(self, file_path: str):
        super().__init__(file_path)
        self.workbook = Workbook(write_only=True)

    def close(self) -> None:
        file_name = os.path.join(self.output_dir, f'{self.base_name}.xlsx')
        self.workbook.save(file_name)
        logger.info('Tables stored in file: %s', file_name)

    def create_table(self, headers: List[str], name: str) -> None:
        super().create_table(headers, name)
        worksheet = self.workbook.create_sheet(slugify(name)[:31] or 'table')
        worksheet.append(headers)
        self.tables[name] = {
            'headers': headers,
            'worksheet': worksheet,
        }

    def add_rows(self, values: List[dict], table_name: str) -> None:
        table = self.tables[table_name]
        for row in values:
            table['worksheet'].append([_cell(row.get(header, '')) for header in table['headers']])


def _cell(value):
    if isinstance(value, (int, float, str)) or value is None:
        return value
    return str(value)


def writer_for_path(file_path: str) -> DataWriter:
    if file_path.lower().endswith('.xlsx'):
        return XlsxWriter(file_path)
    return CsvWriter(file_path)
