import logging as log
import os

from hlab.errors import ConfigError


def get_command(name, workers=1, verbose=-1):
    """
    lazy import (so the library modules load without the command layer)
    """
    from hlab.commands import command_types
    types = command_types()
    if name not in types:
        return None
    return types[name](workers=workers, verbose=verbose)


def run(command, cfg, workers=1, verbose=-1):
    """Run one command on one parsed ExperimentConfig; returns the Report."""
    cmd = command if not isinstance(command, str) else get_command(command, workers, verbose)
    if cmd is None:
        raise ConfigError('command', 'unknown command {!r}'.format(command))
    return cmd.run_config(cfg)


def process_folder(command, folder, ext='.json', overrides=None, workers=1, verbose=-1):
    """Run a command on one config file or on every config under a folder.

    Returns the reports in sorted path order and the combined exit code.
    """
    from hlab.commands import EXIT_USAGE, Report, worst
    from hlab.config import load_config
    from hlab.utils import grep_ext

    if os.path.isfile(folder):
        files = [folder]
    else:
        files = grep_ext(folder, ext=ext)
    if not files:
        raise ConfigError('config', 'no config found at {}'.format(folder))
    cmd = get_command(command, workers, verbose)
    if cmd is None:
        raise ConfigError('command', 'unknown command {!r}'.format(command))

    reports = []
    for f in files:
        try:
            cfg = load_config(f, overrides)
        except ConfigError as e:
            log.error('%s', e)
            if verbose > 1:
                raise e
            reports.append(Report(command, f, EXIT_USAGE, log=[str(e)]))
            continue
        reports.append(cmd.run_config(cfg))
    return reports, worst(r.exit_code for r in reports)
