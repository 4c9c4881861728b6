"""
Command line front end. Runs one luigi task with a local scheduler:

    qredundancy spectrum --circuit cos.json
    qredundancy spread --a 1,2
    qredundancy rank --target poly:0,1
    qredundancy scdim --a 1,1 --b 0,0 --eps 0.4
    qredundancy bound --kind linear --rank 13
    qredundancy fit --target cos --n 1
    qredundancy sweep --target trig:1,0.5 --encoding linear --n 1..3
    qredundancy verify --trials 100
    qredundancy experiments --config experiments.cfg

Exit status is 0 on success, 1 on errors and 2 when a rank exceeds the sample budget. Reports go to stdout,
diagnostics to stderr.
"""
import sys

import luigi
from luigi.cmdline_parser import CmdlineParser
from luigi.execution_summary import LuigiStatusCode

import tools.misc
import qred  # registers the tasks
from .exceptions import UserException

COMMANDS = {'spectrum': 'Spectrum',
            'spread': 'Spread',
            'rank': 'Rank',
            'scdim': 'ScDim',
            'bound': 'Bound',
            'fit': 'Fit',
            'sweep': 'Sweep',
            'verify': 'Verify',
            'experiments': 'RunExperiments'}

SUCCESS = 0
ERROR = 1
EXCEEDED = 2


def usage():
    return 'usage: qredundancy {{{}}} [--flags]\n'.format(','.join(COMMANDS))


def main(argv=None, stdout=None, stderr=None):
    """
    Runs one command.
    :param argv: arguments without the program name
    :return: exit status
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    if len(argv) == 0 or argv[0] not in COMMANDS:
        stderr.write(usage())
        return ERROR
    argv[0] = COMMANDS[argv[0]]
    try:
        workers = tools.misc.thread_cap()
        with CmdlineParser.global_instance(argv) as cp:
            task = cp.get_task_obj()
        task.validate()
    except (UserException, ValueError) as e:
        stderr.write('ERROR: {}\n'.format(e))
        return ERROR
    except SystemExit:
        # argparse has already printed its message
        return ERROR
    result = luigi.build([task], local_scheduler=True, detailed_summary=True, workers=workers)
    if result.status not in (LuigiStatusCode.SUCCESS, LuigiStatusCode.SUCCESS_WITH_RETRY):
        stderr.write('ERROR: {} did not complete; see the log above.\n'.format(task))
        return ERROR
    stdout.write(task.summary())
    return task.exit_status()


if __name__ == '__main__':
    sys.exit(main())
