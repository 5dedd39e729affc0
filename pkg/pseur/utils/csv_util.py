import csv
import numbers

SWEEP_HEADER = ('sweep_value', 'method', 'mean_sinr_db', 'std_db',
                'mean_dev_db', 'trials', 'failures')
BEAMPATTERN_HEADER = ('theta_deg', 'gain_db')


def _format_cell(value):
    if isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        # avoid '-0.000000'
        text = f'{float(value):.6f}'
        return '0.000000' if text == '-0.000000' else text
    raise TypeError(f'Unsupported CSV cell type {type(value)}.')


def write_csv(path, header, rows):
    """Write a UTF-8 CSV with a header row.

    Floats are written in fixed point with 6 decimals; rows are written in the
    given order.

    Args:
        path (str): Output file.
        header (Sequence[str]): Column names.
        rows (Iterable[Sequence]): Table rows.
    """
    try:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                if len(row) != len(header):
                    raise ValueError(f'Row {row} does not match header '
                                     f'{header}.')
                writer.writerow([_format_cell(v) for v in row])
    except OSError as err:
        raise OSError(f'Cannot write CSV file {path}: {err}') from err


def load_csv(path):
    """Read a CSV written by ``write_csv``.

    Returns:
        tuple[list[str], list[list[str]]]: Header and rows as strings.
    """
    try:
        with open(path, 'r', encoding='utf-8', newline='') as f:
            reader = csv.reader(f)
            lines = list(reader)
    except OSError as err:
        raise OSError(f'Cannot read CSV file {path}: {err}') from err
    if not lines:
        raise ValueError(f'CSV file {path} has no header.')
    return lines[0], lines[1:]


def export_sweep(rows, path):
    """Write ResultRow objects with the sweep schema."""
    write_csv(path, SWEEP_HEADER, [(row.sweep_value, row.method,
                                    row.mean_sinr_db, row.std_db,
                                    row.mean_dev_db, row.trials,
                                    row.failures) for row in rows])


def export_beampattern(pattern, path):
    """Write a Beampattern with columns theta_deg, gain_db."""
    write_csv(path, BEAMPATTERN_HEADER,
              list(zip(pattern.angles.tolist(), pattern.gain_db.tolist())))
