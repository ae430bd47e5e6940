"""Исключения kloost. Код выхода CLI берётся из атрибута exit_code."""


class KloostError(Exception):
    exit_code = 1


class DomainError(KloostError, ValueError):
    """Недопустимый математический вход: inv(0), a=0, приводимый модуль и т.п."""
    exit_code = 2


class PreconditionError(KloostError, ValueError):
    exit_code = 2


class ResourceError(KloostError):
    """Запрошенный перебор не укладывается в бюджет."""
    exit_code = 3


class ConsistencyError(KloostError):
    """Неточное деление, расхождение формулы и перебора, несовпадение с эталоном."""
    exit_code = 4
