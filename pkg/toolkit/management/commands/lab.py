from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from toolkit.exceptions import SpecReadError, UnknownCommandError
from toolkit.runner import COMMANDS, EXIT_NO_INPUT, EXIT_OK, EXIT_USAGE, run_command
from toolkit.specs import render_document

USAGE = (
    'usage: manage.py lab {' + ','.join(COMMANDS) + '} [--spec PATH] [--out PATH] [--scene PATH] '
    '[--max-level N] [--depth K] [--samples N] [--seed S] [--tol T] [--word-length L] '
    '[--from Z] [--to Z] [--kind KIND] [--count N] [--ring-size N] '
    '[--min-radius F] [--max-radius F] [--min-gap F]'
)


class Command(BaseCommand):
    help = 'Run a schottky-lab measurement command on a circle domain spec'

    def add_arguments(self, parser):
        parser.add_argument('lab_command', type=str, help='One of: ' + ', '.join(COMMANDS))
        parser.add_argument('--spec', type=str, help='Spec file (JSON)')
        parser.add_argument('--out', type=str, help='Result document path; stdout when omitted')
        parser.add_argument('--scene', type=str, help='SVG scene path')
        parser.add_argument('--max-level', type=int, dest='max_level')
        parser.add_argument('--depth', type=int)
        parser.add_argument('--samples', type=int)
        parser.add_argument('--seed', type=int)
        parser.add_argument('--tol', type=float)
        parser.add_argument('--word-length', type=int, dest='word_length')
        parser.add_argument('--from', type=str, dest='source', help="Complex literal or 'x0'")
        parser.add_argument('--to', type=str, dest='target', help="Complex literal or 'x0'")
        parser.add_argument('--kind', type=str, help='random_packing or sierpinski_type')
        parser.add_argument('--count', type=int)
        parser.add_argument('--ring-size', type=int, dest='ring_size')
        parser.add_argument('--min-radius', type=float, dest='min_radius')
        parser.add_argument('--max-radius', type=float, dest='max_radius')
        parser.add_argument('--min-gap', type=float, dest='min_gap')

    def handle(self, *args, **options):
        command = options['lab_command']
        keys = (
            'max_level', 'depth', 'samples', 'seed', 'tol', 'word_length', 'source', 'target',
            'kind', 'count', 'ring_size', 'min_radius', 'max_radius', 'min_gap',
        )
        try:
            result = run_command(command, options.get('spec'), **{key: options.get(key) for key in keys})
        except UnknownCommandError as e:
            self.stderr.write(USAGE)
            raise CommandError(str(e), returncode=EXIT_USAGE)
        except SpecReadError as e:
            raise CommandError(str(e), returncode=EXIT_NO_INPUT)

        if result.document:
            content = render_document(result.document)
            if options.get('out'):
                Path(options['out']).write_bytes(content)
                self.stdout.write(self.style.SUCCESS(f'Result written to {options["out"]}'))
            else:
                self.stdout.write(content.decode('utf-8'), ending='')
        if result.scene is not None and options.get('scene'):
            result.scene.write(options['scene'])
            self.stdout.write(self.style.SUCCESS(f'Scene written to {options["scene"]}'))

        if result.exit_code != EXIT_OK:
            self.stderr.write(self.style.ERROR(f'{command} failed: {result.message}'))
            raise CommandError(f'{command} exited with status {result.exit_code}', returncode=result.exit_code)
