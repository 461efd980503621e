from misreading.management.commands.allowed import Command as AllowedCommand


class Command(AllowedCommand):
    help = 'List the substitutions the crystal operators forbid at an error level'
    which = 'forbidden'
