"""
Sweep Journal Module
Append-only record of completed sweep nodes so an interrupted sweep resumes
where it stopped. Each line is one JSON object {"key": ..., "row": {...}},
flushed and fsynced before the next node is accepted.
"""

import json
import os

import pandas as pd

from utils.helpers import digest_inputs, json_ready
from utils.logger import setup_logger

logger = setup_logger(__name__)


def node_key(node, settings):
    """
    Key of one sweep node under fixed solver tolerances.

    Args:
        node (dict): alpha, a, A, dim, k of the node
        settings (dict): Solver tolerances of the run

    Returns:
        str: Readable node label followed by a digest of node and tolerances
    """
    label = ",".join(f"{name}={node[name]!r}" for name in ('alpha', 'a', 'A', 'dim', 'k'))
    return f"{label}#{digest_inputs({'node': node, 'settings': settings})}"


class SweepJournal:
    """Journal file next to the sweep output."""

    def __init__(self, path):
        self.path = path
        self._entries = self._load()

    def _load(self):
        entries = {}
        if not os.path.exists(self.path):
            return entries

        with open(self.path, 'r', encoding='utf-8') as handle:
            for number, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                    entries[entry['key']] = entry['row']
                except (json.JSONDecodeError, KeyError, TypeError):
                    # A torn final line from an interrupted write is dropped
                    logger.warning(f"Skipping unreadable journal line {number} in {self.path}")
        logger.info(f"Journal {self.path}: {len(entries)} completed nodes")
        return entries

    def __contains__(self, key):
        return key in self._entries

    def __len__(self):
        return len(self._entries)

    def record(self, key, row):
        """Append one completed node and force it to disk."""
        line = json.dumps({'key': key, 'row': json_ready(row)})
        with open(self.path, 'a', encoding='utf-8') as handle:
            handle.write(line + "\n")
            handle.flush()
            os.fsync(handle.fileno())
        self._entries[key] = row

    def rows(self, keys=None):
        """Journaled rows, restricted to `keys` when given."""
        if keys is None:
            return list(self._entries.values())
        return [self._entries[key] for key in keys if key in self._entries]

    def frame(self, keys=None, sort_by=('alpha', 'a')):
        """Rows as a DataFrame sorted by the grid coordinates, one row per node."""
        frame = pd.DataFrame(self.rows(keys))
        if frame.empty:
            return frame
        frame = frame.drop_duplicates(subset=['key'], keep='last')
        return frame.sort_values(list(sort_by), kind='mergesort').reset_index(drop=True)
