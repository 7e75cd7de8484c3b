import csv
import gzip
import io
import json
import multiprocessing
import platform
from enum import Enum
from fractions import Fraction
from pathlib import Path

import numpy as np
from tqdm import tqdm


def read_gz_js(file):
    with gzip.open(file, 'r') as fin:
        json_bytes = fin.read()
    return json.loads(json_bytes.decode('utf-8'))


def write_gz_js(obj, file):
    content = json.dumps(todict(obj), sort_keys=True).encode('utf-8')
    # mtime pinned so identical reports give identical bytes
    with gzip.GzipFile(file, 'w', mtime=0) as gf:
        gf.write(content)


def read_js(file):
    if str(file).endswith('.gz'):
        return read_gz_js(file)
    with open(file, 'r', encoding='utf-8') as fin:
        return json.load(fin)


def grep_ext(folder, ext=None):
    paths = [p for p in Path(folder).rglob('*') if p.is_file()]
    if ext:
        paths = [str(p) for p in paths
                 if p.suffix == ext or str(p).endswith(ext)]
    else:
        paths = [str(p) for p in paths]
    return sorted(paths)


def _indexed(args):
    func, ind, item = args
    return ind, func(item)


def m_map(func, inputs, max_workers=1, progress=False):
    """Map `func` over `inputs`, returning results in input order.

    With more than one worker the items go through a process pool; the
    results are re-ordered by index, so the output never depends on the
    number of workers or on scheduling.
    """
    inputs = list(inputs)
    if max_workers is None or max_workers < 0:
        max_workers = multiprocessing.cpu_count()
    if platform.system() == 'Windows':
        # windows hard limit is 61
        max_workers = min(max_workers, 55)
    if max_workers <= 1 or len(inputs) <= 1:
        return [func(x) for x in tqdm(inputs, disable=not progress)]

    results = [None] * len(inputs)
    jobs = [(func, i, x) for i, x in enumerate(inputs)]
    with multiprocessing.Pool(min(max_workers, len(inputs))) as e:
        for ind, result in tqdm(e.imap_unordered(_indexed, jobs),
                                total=len(jobs), disable=not progress):
            results[ind] = result
    return results


def todict(obj):
    """Plain JSON-ready structure for reports."""
    if hasattr(obj, 'to_dict'):
        return todict(obj.to_dict())
    if hasattr(obj, 'to_json'):
        return todict(obj.to_json())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): todict(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [todict(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items = sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
        return items
    if isinstance(obj, np.ndarray):
        return todict(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Fraction):
        return float(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    return obj


def to_json_text(obj):
    return json.dumps(todict(obj), sort_keys=True, indent=2, ensure_ascii=False)


def to_csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ' '.join(str(_cell(x)) for x in v)
    return todict(v)
