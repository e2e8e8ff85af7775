from dataclasses import dataclass, field


def _check_reduced(indices):
    for position, index in enumerate(indices):
        if index < 1:
            raise ValueError(f"Generator indices start at 1, got {index}")
        if position and indices[position - 1] == index:
            raise ValueError(f"Index {index} repeats at position {position}, word is not reduced")


@dataclass(frozen=True)
class ReducedWord:
    """R_{i1}∘…∘R_{ik} with i_j ≠ i_{j+1}"""

    indices: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'indices', tuple(int(i) for i in self.indices))
        _check_reduced(self.indices)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __getitem__(self, position):
        return self.indices[position]

    @property
    def first(self):
        return self.indices[0] if self.indices else None

    @property
    def last(self):
        return self.indices[-1] if self.indices else None

    def concatenate(self, other):
        """Product of group elements, cancelling R_j∘R_j at the junction"""
        left, right = list(self.indices), list(other)
        while left and right and left[-1] == right[0]:
            left.pop()
            right.pop(0)
        return ReducedWord(tuple(left + right))

    def extended(self, index):
        return self.concatenate((index,))

    def inverse(self):
        """Generators are involutions"""
        return ReducedWord(self.indices[::-1])

    def __str__(self):
        return '(' + ','.join(str(i) for i in self.indices) + ')' if self.indices else '()'


@dataclass(frozen=True)
class ReflectedDisk:
    """R_{i1}∘…∘R_{ik}(B_{i_{k+1}}) with its address"""

    word: ReducedWord
    terminal: int
    disk: object

    def __post_init__(self):
        if self.word.last == self.terminal:
            raise ValueError(f"Terminal index {self.terminal} repeats the last word index")

    @property
    def level(self):
        return len(self.word)

    @property
    def address(self):
        return self.word.indices + (self.terminal,)


@dataclass(frozen=True)
class LimitAddress:
    """Truncated index sequence of a limit point, no consecutive repeats"""

    indices: tuple

    def __post_init__(self):
        object.__setattr__(self, 'indices', tuple(int(i) for i in self.indices))
        if not self.indices:
            raise ValueError("A limit address needs at least one index")
        _check_reduced(self.indices)

    @classmethod
    def periodic(cls, pattern, depth):
        pattern = tuple(pattern)
        return cls(tuple(pattern[k % len(pattern)] for k in range(depth)))

    @property
    def depth(self):
        return len(self.indices)


@dataclass(frozen=True)
class LimitPoint:
    """Centre of a nested disk and its diameter"""

    point: complex
    diameter: float
    depth: int


@dataclass(frozen=True)
class AreaDecay:
    """Max complement-disk area per level with the measured and Jacobian rates"""

    areas: tuple
    rate: float
    jacobian_bound: float


@dataclass(frozen=True)
class ExtensionValue:
    """f̃(z) with the word of the copy containing z and an error bound"""

    value: complex
    error_bound: float
    word: ReducedWord = field(default_factory=ReducedWord)


@dataclass(frozen=True)
class ConjugationReport:
    """Conjugation residual of f̃ across copies and its agreement with f"""

    residual: float
    agreement: float
    words: int
    samples: int
    witness: tuple = ()
    flagged: bool = False
