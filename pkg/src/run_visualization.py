import logging

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt
import pandas as pd

from .errors import ArgumentError
from .mips import parse_hyperparams

logger = logging.getLogger(__name__)


def load_results(paths):
    frames = [pd.read_csv(path) for path in paths]
    results = pd.concat(frames, ignore_index=True)
    missing = {'method', 'hyperparams', 'K', 'mean_precision', 'speedup'} - set(results.columns)
    if missing:
        raise ArgumentError(f'result files lack the columns {sorted(missing)}')
    sigmas = results['hyperparams'].fillna('').map(lambda text: parse_hyperparams(text).get('sigma'))
    results['sigma'] = pd.to_numeric(sigmas, errors='coerce')
    return results


def plot_results(results, output_path):
    """Precision@K against speedup (sweep files) or against sigma (noise files), one panel per K."""
    noise = results['sigma'].notna().all()
    x = 'sigma' if noise else 'speedup'
    ks = sorted(results['K'].unique())
    fig, axes = plt.subplots(1, len(ks), figsize=(5 * len(ks), 4), squeeze=False)
    for ax, K in zip(axes[0], ks):
        at_k = results[results['K'] == K]
        for method, group in at_k.groupby('method', sort=True):
            group = group.sort_values(x)
            ax.plot(group[x], group['mean_precision'], marker='o', label=method)
        ax.set_title(f'K = {K}')
        ax.set_xlabel('noise sigma' if noise else 'speedup')
        ax.set_ylabel('precision@K')
        ax.set_ylim(0, 1.05)
        if not noise:
            ax.set_xscale('log')
        ax.legend()
    fig.tight_layout()
    fig.savefig(output_path)
    plt.close(fig)
    logger.info(f'Saved plot to {output_path}')


def run_visualization(args):
    if not args.results:
        raise ArgumentError('--results is required for the plot command')
    if args.out is None:
        raise ArgumentError('--out is required for the plot command')
    plot_results(load_results(args.results), args.out)
