import logging
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Type

from src.config.environment import ENV_CONFIG
from src.errors import ComplexSpectrum, ConfigError, WrongCount
from src.keying.cipher import KeystreamState
from src.linalg.matrix import EigenSet

logger = logging.getLogger(__name__)


class SelectionPolicy(ABC):
    """Base class for eigenvalue selection policies."""

    name = ""

    @abstractmethod
    def choose(self, eligible: List[float]) -> float:
        """
        Pick one value.

        Args:
            eligible: Real eigenvalues in canonical (descending) order, non-empty

        Returns:
            The selected eigenvalue
        """
        pass

    def to_text(self) -> str:
        return self.name

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __str__(self):
        return self.to_text()


class MaxAbsReal(SelectionPolicy):
    name = "max-abs-real"

    def choose(self, eligible: List[float]) -> float:
        # ties toward the positive value
        return max(eligible, key=lambda v: (abs(v), v))


class MinReal(SelectionPolicy):
    name = "min-real"

    def choose(self, eligible: List[float]) -> float:
        return min(eligible)


class Index(SelectionPolicy):
    name = "index"

    def __init__(self, k: int):
        if k < 0:
            raise ConfigError(f"index policy needs a non-negative index, got {k}")
        self.k = k

    def choose(self, eligible: List[float]) -> float:
        if self.k >= len(eligible):
            raise WrongCount(f"index {self.k} is out of range for {len(eligible)} eligible eigenvalues")
        return eligible[self.k]

    def to_text(self) -> str:
        return f"index:{self.k}"


class SeededRandom(SelectionPolicy):
    name = "seeded"

    def __init__(self, seed: int):
        if not 0 <= seed < 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed

    def choose(self, eligible: List[float]) -> float:
        draw = KeystreamState(self.seed).next()
        return eligible[(draw * len(eligible)) >> 64]

    def to_text(self) -> str:
        return f"seeded:{self.seed}"


class PolicyFactory:
    """Factory for selection policies keyed by their config name."""

    def __init__(self):
        # Register policy types
        self._policy_types: Dict[str, Type[SelectionPolicy]] = {
            MaxAbsReal.name: MaxAbsReal,
            MinReal.name: MinReal,
            Index.name: Index,
            SeededRandom.name: SeededRandom,
        }

    def get_policy(self, text: str) -> SelectionPolicy:
        """
        Build a policy from its config spelling.

        Args:
            text: 'max-abs-real', 'min-real', 'index:<k>' or 'seeded:<seed>'

        Returns:
            A policy instance
        """
        name, _, argument = text.strip().partition(":")
        policy_class = self._policy_types.get(name)
        if policy_class is None:
            raise ConfigError(f"unknown selection policy '{text}'")
        if policy_class in (Index, SeededRandom):
            if not (argument.strip().isascii() and argument.strip().isdigit()):
                raise ConfigError(f"policy '{name}' needs a non-negative integer argument, got '{argument}'")
            return policy_class(int(argument))
        if argument:
            raise ConfigError(f"policy '{name}' takes no argument")
        return policy_class()

    def register_policy_type(self, name: str, policy_class: Type[SelectionPolicy]) -> None:
        self._policy_types[name] = policy_class
        logger.info(f"Registered new selection policy: {name}")


policy_factory = PolicyFactory()


def parse_policy(text: str) -> SelectionPolicy:
    return policy_factory.get_policy(text)


def eligible_reals(spectrum: EigenSet, imag_tol: float) -> List[float]:
    """Real parts of eigenvalues with |im| <= imag_tol * (1 + |lambda|), canonical order kept."""
    return [v.re for v in spectrum if abs(v.im) <= imag_tol * (1.0 + abs(v))]


def select_eigenvalue(spectrum: EigenSet, policy: SelectionPolicy, imag_tol: Optional[float] = None) -> float:
    """
    Apply a selection policy over the real eigenvalues of a spectrum.

    Raises:
        ComplexSpectrum: no eigenvalue is real within imag_tol
    """
    imag_tol = ENV_CONFIG["imag_tol"] if imag_tol is None else imag_tol
    if len(spectrum) == 0:
        raise ComplexSpectrum("spectrum is empty")
    eligible = eligible_reals(spectrum, imag_tol)
    if not eligible:
        raise ComplexSpectrum(f"no real eigenvalue among {[str(v) for v in spectrum]}")
    dropped = len(spectrum) - len(eligible)
    if dropped:
        logger.warning(f"{dropped} complex eigenvalue(s) are not eligible as keys")
    chosen = policy.choose(eligible)
    logger.info(f"Selected eigenvalue {chosen!r} with policy {policy}")
    return chosen
