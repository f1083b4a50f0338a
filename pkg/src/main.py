import logging
import os
import sys

from transformers import HfArgumentParser

from .args import ProgramArguments, COMMANDS
from .errors import ArgumentError, MipsError
from .run_bench import gen_data, build_index, run_query, run_ground_truth, run_sweep, run_noise, run_calibrate
from .run_visualization import run_visualization
from .utils import setup_logger, set_seed, add_file_handler, configuration_table

logger = logging.getLogger(__name__)

HANDLERS = {
    'gen-data': gen_data,
    'build-index': build_index,
    'query': run_query,
    'ground-truth': run_ground_truth,
    'sweep': run_sweep,
    'noise': run_noise,
    'calibrate': run_calibrate,
    'plot': run_visualization,
}


def parse_command(remaining):
    if len(remaining) != 1 or remaining[0] not in COMMANDS:
        raise ArgumentError(f'expected exactly one command out of {COMMANDS}, got {remaining}')
    return remaining[0]


def main(command, args):
    HANDLERS[command](args)


def cli(argv=None):
    parser = HfArgumentParser(ProgramArguments)
    args, remaining = parser.parse_args_into_dataclasses(args=argv, return_remaining_strings=True)

    if args.seed > 0:
        set_seed(args.seed)

    root = setup_logger()
    file_handler = None

    if args.run_base_path is not None and args.run_name is not None:
        args.output_path = os.path.join(args.run_base_path, args.run_name)
        os.makedirs(args.output_path, exist_ok=True)
        file_handler = add_file_handler(root, args.output_path)

    logger.info('COMMAND: {}'.format(' '.join(argv if argv is not None else sys.argv[1:])))
    logger.info('Configuration:\n{}'.format(configuration_table(args)))

    try:
        main(parse_command(remaining), args)
    except MipsError as e:
        logger.error(f'{type(e).__name__}: {e}')
        return 1
    finally:
        if file_handler is not None:
            root.removeHandler(file_handler)
            file_handler.close()
    return 0


if __name__ == '__main__':
    sys.exit(cli())
