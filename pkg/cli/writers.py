"""
Output Writers Module
CSV tables through pandas and JSON documents, both with 17 significant digits.
"""

import json
import os
import sys

import pandas as pd

from utils.config import Config
from utils.helpers import json_ready
from utils.logger import setup_logger

logger = setup_logger(__name__)

CSV_FLOAT_FORMAT = '%.17g'


def companion_path(path, suffix, extension=None):
    """
    Path next to `path` with an extra suffix before the extension.

    Example: out/w.csv with suffix 'events' gives out/w.events.csv; an explicit
    extension replaces the original one.
    """
    stem, original = os.path.splitext(path)
    return f"{stem}.{suffix}{extension or original or '.csv'}"


def write_table(frame, path=None):
    """
    Write a DataFrame as CSV to `path`, or to standard output when path is None.

    Args:
        frame (pd.DataFrame): Table to write
        path (str): Destination file

    Returns:
        str: The path written, or None for standard output
    """
    if path is None:
        frame.to_csv(sys.stdout, index=False, float_format=CSV_FLOAT_FORMAT)
        return None
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def read_table(path):
    """Read a CSV written by write_table without losing float digits."""
    return pd.read_csv(path, float_precision='round_trip')


def dump_json(payload, digits=None):
    digits = digits or Config.JSON_DIGITS
    return json.dumps(json_ready(payload, digits), indent=2)


def write_json(payload, path=None, digits=None):
    """
    Write a JSON document; NaN and infinities become null.

    Args:
        payload: Nested dict/list structure (numpy values allowed)
        path (str): Destination file, standard output when None
        digits (int): Significant digits for floats

    Returns:
        str: The path written, or None for standard output
    """
    text = dump_json(payload, digits)
    if path is None:
        sys.stdout.write(text + "\n")
        return None
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(text + "\n")
    logger.info(f"Wrote JSON to {path}")
    return path


def trajectory_frames(trajectory):
    """
    Sample and event tables of a trajectory.

    Returns:
        tuple: (samples DataFrame with r, w, v, w_prime, segment;
                events DataFrame with kind, r, w)
    """
    samples = pd.DataFrame(trajectory.samples())
    events = pd.DataFrame(
        [event.as_dict() for event in trajectory.events],
        columns=['kind', 'r', 'w'],
    )
    return samples, events


def spectrum_frame(spectra):
    """
    One row per index k with beta and mu columns of every computed sign.

    Args:
        spectra (dict): {'plus': Spectrum, 'minus': Spectrum}, either may be missing

    Returns:
        pd.DataFrame: k, beta_plus, mu_plus, beta_minus, mu_minus (present signs only)
    """
    count = max(spectrum.count for spectrum in spectra.values())
    frame = pd.DataFrame({'k': range(1, count + 1)})
    for label in ('plus', 'minus'):
        if label in spectra:
            frame[f'beta_{label}'] = spectra[label].betas
            frame[f'mu_{label}'] = spectra[label].mus
    return frame
