"""Elementary factorizations of theta/eta and the reverse direction.

``theta(v)`` and ``eta(v)`` are products of ``E_{1,*}`` resp. ``E_{*,1}``
letters; conversely every ``E_{1,i}(a)`` is a single ``theta`` and every
``E_{i,1}(a)`` a single ``eta``, and the remaining ``E_{i,j}(a)`` follow from
the commutator ``[E_{i,1}(a), E_{1,j}(1)]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .matrix import Mat, elementary_product
from .rings import Element, Ring
from .vaserstein import HyperbolicFormData, eta, theta

THETA = "THETA"
ETA = "ETA"
ROW = "row"
COLUMN = "column"


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class ElementaryWord:
    ring: Ring
    size: int
    letters: tuple[tuple[int, int, Element], ...] = ()

    def __post_init__(self):
        for i, j, _ in self.letters:
            if i == j or not (1 <= i <= self.size and 1 <= j <= self.size):
                raise DecompositionError(f"bad elementary letter ({i}, {j}) for size {self.size}")

    def __len__(self) -> int:
        return len(self.letters)

    def evaluate(self) -> Mat:
        return elementary_product(self.ring, self.size, self.letters)


class GeneratorLetter(NamedTuple):
    tag: str
    v: tuple


@dataclass(frozen=True)
class GeneratorWord:
    data: HyperbolicFormData
    letters: tuple[GeneratorLetter, ...] = field(default=())

    def __post_init__(self):
        for tag, v in self.letters:
            if tag not in (THETA, ETA):
                raise DecompositionError(f"unknown generator {tag!r}")
            self.data.vector(v)

    def __len__(self) -> int:
        return len(self.letters)

    def evaluate(self) -> Mat:
        acc = Mat.identity(self.data.ring, self.data.N)
        for tag, v in self.letters:
            acc = acc @ (theta(self.data, v) if tag == THETA else eta(self.data, v))
        return acc


def evaluate_word(word: ElementaryWord | GeneratorWord) -> Mat:
    return word.evaluate()


# ---------------------------------------------------------------------------
# forward: theta / eta as elementary products
# ---------------------------------------------------------------------------


def factorize_theta(data: HyperbolicFormData, v: Sequence[Element]) -> ElementaryWord:
    R = data.ring
    a = (None,) + tuple(R.conj(x) for x in data.vector(v))
    m, n = data.m, data.n
    mli = R.neg(R.lam_inv)
    phi = data.phi.rows
    letters = [(1, 2 * k, a[2 * k + 1]) for k in range(1, m)]
    letters += [(1, 2 * k + 1, R.mul(mli, a[2 * k])) for k in range(1, m)]
    for k in range(1, n + 1):
        s = R.sum(R.mul(a[2 * m - 1 + j], phi[j - 1][k - 1]) for j in range(1, n + 1))
        letters.append((1, 2 * m - 1 + k, R.mul(mli, s)))
    return ElementaryWord(R, data.N, tuple(letters))


def factorize_eta(data: HyperbolicFormData, v: Sequence[Element]) -> ElementaryWord:
    R = data.ring
    a = (None,) + tuple(R.conj(x) for x in data.vector(v))
    m, n = data.m, data.n
    mli = R.neg(R.lam_inv)
    li2 = R.mul(R.lam_inv, R.lam_inv)
    pinv = data.phi_inv.rows
    letters = [(2 * k, 1, R.mul(li2, a[2 * k + 1])) for k in range(1, m)]
    letters += [(2 * k + 1, 1, R.mul(mli, a[2 * k])) for k in range(1, m)]
    for k in range(1, n + 1):
        s = R.sum(R.mul(a[2 * m - 1 + j], pinv[k - 1][j - 1]) for j in range(1, n + 1))
        letters.append((2 * m - 1 + k, 1, R.mul(mli, s)))
    return ElementaryWord(R, data.N, tuple(letters))


# ---------------------------------------------------------------------------
# converse: preimages of E_{1,i}(a) and E_{i,1}(a)
# ---------------------------------------------------------------------------


def _check_index(data: HyperbolicFormData, i: int) -> None:
    if not 2 <= i <= data.N:
        raise DecompositionError(f"index {i} outside 2..{data.N}")


def generator_preimage(data: HyperbolicFormData, side: str, i: int, a: Element) -> tuple:
    """``v`` with ``theta(v) = E_{1,i}(a)`` (row side) or ``eta(v) = E_{i,1}(a)``.

    Row 1 of ``theta(v) - I`` is ``-lam^-1 vbar mu`` and column 1 of
    ``eta(v) - I`` is ``-lam^-1 rho vbar^T``; both are solved against the
    invertible tail block of ``mu`` / ``rho``.  ``v_1`` is always 0.
    """
    _check_index(data, i)
    R = data.ring
    scaled = R.neg(R.mul(R.lam, a))
    if side == ROW:
        vbar_tail = [R.mul(scaled, x) for x in data.tail_inv.rows[i - 2]]
    elif side == COLUMN:
        vbar_tail = [R.mul(scaled, x) for x in data.tail.col(i - 2)]
    else:
        raise DecompositionError(f"side must be 'row' or 'column', got {side!r}")
    return (R.zero,) + tuple(R.conj(x) for x in vbar_tail)


def closed_form_preimage(data: HyperbolicFormData, side: str, i: int, a: Element) -> tuple:
    """The printed preimage formulas, coordinate by coordinate.

    These reproduce ``E_{1,i}(a)`` / ``E_{i,1}(a)`` on the hyperbolic indices
    ``2..2m-1`` in general, but on the ``phi`` indices only when ``lam = 1``
    and ``phi`` is anti-Hermitian.
    """
    _check_index(data, i)
    R = data.ring
    m = data.m
    ab = R.conj(a)
    li, li2 = R.lam_inv, R.mul(R.lam_inv, R.lam_inv)
    v = [R.zero] * (data.N + 1)  # 1-based scratch
    if i <= 2 * m - 1:
        if i % 2 == 0:
            v[i + 1] = ab if side == ROW else R.mul(li2, ab)
        else:
            v[i - 1] = R.neg(R.mul(li, ab))
    else:
        k = i - (2 * m - 1)
        for j in range(1, data.n + 1):
            if side == ROW:
                coeff = data.phi_inv.rows[j - 1][k - 1]
            else:
                coeff = data.phi.rows[k - 1][j - 1]
            v[2 * m - 1 + j] = R.prod(li2, coeff, ab)
    if side not in (ROW, COLUMN):
        raise DecompositionError(f"side must be 'row' or 'column', got {side!r}")
    return tuple(v[1:])


def decompose_elementary(data: HyperbolicFormData, i: int, j: int, a: Element) -> GeneratorWord:
    """Write ``E_{i,j}(a)`` as a word of at most four theta/eta letters."""
    N = data.N
    if i == j:
        raise DecompositionError("E_(i,j) needs i != j")
    if not (1 <= i <= N and 1 <= j <= N):
        raise DecompositionError(f"index ({i}, {j}) out of range 1..{N}")
    R = data.ring
    if i == 1:
        return GeneratorWord(data, (GeneratorLetter(THETA, generator_preimage(data, ROW, j, a)),))
    if j == 1:
        return GeneratorWord(data, (GeneratorLetter(ETA, generator_preimage(data, COLUMN, i, a)),))
    # E_ij(a) = E_i1(a) E_1j(1) E_i1(-a) E_1j(-1)
    one = R.one
    return GeneratorWord(
        data,
        (
            GeneratorLetter(ETA, generator_preimage(data, COLUMN, i, a)),
            GeneratorLetter(THETA, generator_preimage(data, ROW, j, one)),
            GeneratorLetter(ETA, generator_preimage(data, COLUMN, i, R.neg(a))),
            GeneratorLetter(THETA, generator_preimage(data, ROW, j, R.neg(one))),
        ),
    )


def normalize(data: HyperbolicFormData, letters: Iterable[GeneratorLetter]) -> tuple[GeneratorLetter, ...]:
    """Merge adjacent letters with the same tag and drop zero vectors.

    Valid because ``theta(v) theta(w) = theta(v + w)`` (likewise for eta).
    """
    R = data.ring
    out: list[GeneratorLetter] = []
    for letter in letters:
        if all(R.is_zero(x) for x in letter.v):
            continue
        if out and out[-1].tag == letter.tag:
            merged = tuple(R.add(x, y) for x, y in zip(out[-1].v, letter.v))
            out.pop()
            if all(R.is_zero(x) for x in merged):
                continue
            letter = GeneratorLetter(letter.tag, merged)
        out.append(letter)
    return tuple(out)


def decompose_word(data: HyperbolicFormData, word: ElementaryWord) -> GeneratorWord:
    if word.size != data.N or word.ring != data.ring:
        raise DecompositionError("word does not match the form data")
    letters: list[GeneratorLetter] = []
    for i, j, a in word.letters:
        letters.extend(decompose_elementary(data, i, j, a).letters)
    return GeneratorWord(data, normalize(data, letters))
