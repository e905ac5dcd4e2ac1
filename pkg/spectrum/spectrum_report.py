"""
Spectrum Report Module
Summary of a pair of half-spectra: interlacing margins, gap ratios and the
growth exponent of mu_k in k.
"""

import numpy as np
from scipy.optimize import curve_fit

from utils.errors import InvalidParameters

GROWTH_FIRST_INDEX = 4


def _offset_power_law(k, exponent, offset, log_scale):
    return exponent * np.log(k + offset) + log_scale


def fit_growth(mus, first_index=GROWTH_FIRST_INDEX):
    """
    Fit the growth exponent of mu_k.

    The plain log-log slope is biased upward at finite K whenever the zeros
    carry a phase offset (beta_k ~ (k - 1/2) Delta for N = 1), so the model
    log mu_k = e log(k + c) + b is fitted as well.

    Args:
        mus (ndarray): mu_1..mu_K
        first_index (int): First k used in the fit (falls back to 1 for short spectra)

    Returns:
        dict: slope (plain log-log), exponent and offset (offset model), k range;
            None when fewer than two eigenvalues are available
    """
    mus = np.asarray(mus, dtype=float)
    if len(mus) < 2:
        return None

    start = first_index if len(mus) >= first_index + 2 else 1
    k = np.arange(start, len(mus) + 1, dtype=float)
    log_mu = np.log(mus[start - 1:])
    slope, intercept = np.polyfit(np.log(k), log_mu, 1)

    exponent, offset = float(slope), 0.0
    if len(k) >= 4:
        try:
            popt, _ = curve_fit(
                _offset_power_law,
                k,
                log_mu,
                p0=(slope, 0.0, intercept),
                bounds=([0.0, -0.99 * start, -np.inf], [np.inf, np.inf, np.inf]),
                maxfev=20000,
            )
            exponent, offset = float(popt[0]), float(popt[1])
        except (RuntimeError, ValueError):
            pass

    return {
        'k_first': int(start),
        'k_last': int(len(mus)),
        'slope': float(slope),
        'exponent': exponent,
        'offset': offset,
    }


def interlacing_margins(plus, minus):
    """
    Margins mu_{k+1}^+ - mu_k^- and mu_{k+1}^- - mu_k^+ for k = 1..K-1.

    Returns:
        dict: Two lists of margins
    """
    count = min(len(plus), len(minus))
    plus = np.asarray(plus[:count], dtype=float)
    minus = np.asarray(minus[:count], dtype=float)
    return {
        'plus_next_minus_minus': (plus[1:] - minus[:-1]).tolist(),
        'minus_next_minus_plus': (minus[1:] - plus[:-1]).tolist(),
    }


def spectrum_report(spectrum_plus, spectrum_minus):
    """
    Structured summary of the plus and minus spectra of one parameter set.

    Args:
        spectrum_plus (Spectrum): Spectrum of w+
        spectrum_minus (Spectrum): Spectrum of w-

    Returns:
        dict: params, betas, mus, interlacing margins, gap ratios, growth fit
    """
    if spectrum_plus.params != spectrum_minus.params:
        raise InvalidParameters("spectra must share their parameters", stage="spectrum")

    mus_plus = np.asarray(spectrum_plus.mus, dtype=float)
    mus_minus = np.asarray(spectrum_minus.mus, dtype=float)

    report = {
        'params': spectrum_plus.params.as_dict(),
        'count': int(min(len(mus_plus), len(mus_minus))),
        'betas_plus': spectrum_plus.betas.tolist(),
        'betas_minus': spectrum_minus.betas.tolist(),
        'mus_plus': mus_plus.tolist(),
        'mus_minus': mus_minus.tolist(),
        'interlacing': interlacing_margins(mus_plus, mus_minus),
        'gap_ratios': {
            'first': float(mus_minus[0] / mus_plus[0]),
            'second': float(mus_minus[1] / mus_plus[1]) if _has_second(mus_plus, mus_minus) else None,
        },
        'growth_plus': fit_growth(mus_plus),
        'growth_minus': fit_growth(mus_minus),
    }
    return report


def _has_second(mus_plus, mus_minus):
    return len(mus_plus) >= 2 and len(mus_minus) >= 2
