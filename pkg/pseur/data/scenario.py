from dataclasses import dataclass, field, replace

from .array_util import GAIN_STD, PHASE_STD, ArraySpec, db2pow

SOI = 'soi'
INTERFERER = 'interferer'


@dataclass(frozen=True)
class SourceSpec:
    """One far-field narrowband source.

    Attributes:
        direction (float): Nominal direction in degrees, in (-90, 90).
        power (float): Linear power sigma^2. Must be positive.
        kind (str): 'soi' or 'interferer'.
    """
    direction: float
    power: float
    kind: str = INTERFERER

    def __post_init__(self):
        if self.kind not in (SOI, INTERFERER):
            raise ValueError(f'Unknown source kind {self.kind}.')
        if not -90.0 < self.direction < 90.0:
            raise ValueError(
                f'Source direction must lie in (-90, 90), got '
                f'{self.direction}.')
        if not self.power > 0:
            raise ValueError(
                f'Source power must be positive, got {self.power}.')


@dataclass(frozen=True)
class Mismatch:
    """Model error between the presumed and the actual SOI signature.

    Attributes:
        type (str): none | look_direction | gain_phase | coherent_scattering.
        bound (float): Look-direction offsets are U[-bound, bound] degrees.
        gain_std (float): Std of sensor amplitude errors.
        phase_std (float): Std of sensor phase errors in radians.
        num_paths (int): Number of coherently scattered paths.
        angular_spread (float): Std of scattered path directions in degrees.
    """
    type: str = 'none'
    bound: float = 5.0
    gain_std: float = GAIN_STD
    phase_std: float = PHASE_STD
    num_paths: int = 4
    angular_spread: float = 2.0

    def __post_init__(self):
        if self.type not in ('none', 'look_direction', 'gain_phase',
                             'coherent_scattering'):
            raise ValueError(f'Unknown mismatch type {self.type}.')
        if self.bound < 0 or self.gain_std < 0 or self.phase_std < 0 \
                or self.angular_spread < 0 or self.num_paths < 0:
            raise ValueError(f'Mismatch parameters must be >= 0: {self}.')


@dataclass(frozen=True)
class Scenario:
    """Everything needed to synthesize array data.

    Attributes:
        array (ArraySpec): Array geometry.
        sources (tuple[SourceSpec]): The SOI first, then the interferers.
        noise_power (float): Per-element noise power sigma_n^2.
        mismatch (Mismatch): SOI signature error model.
        drifts (tuple[float]): Total sweep of each interferer over the
            observation interval in degrees. Empty means no drift.
        seed (int): Base seed of the random streams.
        look_direction (float | None): Presumed SOI direction. Defaults to
            the nominal SOI direction.
        sector_half_width (float): Half-width of the desired-signal sector in
            degrees. Every interferer must lie further than this from the SOI.
    """
    array: ArraySpec
    sources: tuple
    noise_power: float = 1.0
    mismatch: Mismatch = field(default_factory=Mismatch)
    drifts: tuple = ()
    seed: int = 0
    look_direction: float = None
    sector_half_width: float = 6.0

    def __post_init__(self):
        object.__setattr__(self, 'sources', tuple(self.sources))
        object.__setattr__(self, 'drifts',
                           tuple(float(v) for v in self.drifts))
        kinds = [s.kind for s in self.sources]
        if not kinds or kinds[0] != SOI or kinds.count(SOI) != 1:
            raise ValueError(
                'A scenario needs exactly one SOI, listed first.')
        directions = [s.direction for s in self.sources]
        if len(set(directions)) != len(directions):
            raise ValueError(
                f'Source directions must be distinct, got {directions}.')
        soi_direction = directions[0]
        for theta in directions[1:]:
            if abs(theta - soi_direction) <= self.sector_half_width:
                raise ValueError(
                    f'Interferer at {theta} deg lies within '
                    f'{self.sector_half_width} deg of the SOI at '
                    f'{soi_direction} deg.')
        if self.noise_power < 0:
            raise ValueError(
                f'noise_power must be >= 0, got {self.noise_power}.')
        if self.drifts and len(self.drifts) != len(self.sources) - 1:
            raise ValueError('drifts needs one entry per interferer, got '
                             f'{len(self.drifts)} for '
                             f'{len(self.sources) - 1} interferers.')
        if self.look_direction is not None and \
                abs(self.look_direction) > 90.0:
            raise ValueError('look_direction must lie in [-90, 90], got '
                             f'{self.look_direction}.')

    @property
    def soi(self):
        return self.sources[0]

    @property
    def interferers(self):
        return self.sources[1:]

    @property
    def num_sources(self):
        return len(self.sources)

    @property
    def presumed_direction(self):
        if self.look_direction is None:
            return self.soi.direction
        return self.look_direction

    def interferer_drifts(self):
        if not self.drifts:
            return (0.0, ) * len(self.interferers)
        return self.drifts

    def with_snr(self, snr_db):
        """Copy with the SOI power set to ``snr_db`` over the noise floor."""
        reference = self.noise_power if self.noise_power > 0 else 1.0
        soi = replace(self.soi, power=float(reference * db2pow(snr_db)))
        return replace(self, sources=(soi, ) + tuple(self.interferers))


def scenario_from_opt(scenario_opt, seed=0):
    """Build a Scenario from the ``scenario`` option block.

    Powers are given in dB relative to ``noise_power`` (``snr_db`` for the
    SOI, ``inr_db`` for interferers); angles in degrees.

    Args:
        scenario_opt (dict): The ``scenario`` block of the options.
        seed (int): Base seed. Default: 0.

    Returns:
        Scenario: Validated scenario.
    """
    array = ArraySpec(**scenario_opt['array'])
    noise_power = float(scenario_opt.get('noise_power', 1.0))
    if not noise_power > 0:
        raise ValueError('noise_power must be positive when powers are '
                         f'given in dB, got {noise_power}.')

    soi_opt = scenario_opt['soi']
    sources = [
        SourceSpec(
            float(soi_opt['direction']),
            noise_power * float(db2pow(soi_opt.get('snr_db', 10.0))), SOI)
    ]
    drifts = []
    for interferer in scenario_opt.get('interferers') or []:
        sources.append(
            SourceSpec(
                float(interferer['direction']),
                noise_power * float(db2pow(interferer.get('inr_db', 30.0))),
                INTERFERER))
        drifts.append(float(interferer.get('drift', 0.0)))

    mismatch_opt = dict(scenario_opt.get('mismatch') or {})
    mismatch = Mismatch(**mismatch_opt)
    if not any(drifts):
        drifts = []

    look_direction = scenario_opt.get('look_direction')
    return Scenario(
        array=array,
        sources=tuple(sources),
        noise_power=noise_power,
        mismatch=mismatch,
        drifts=tuple(drifts),
        seed=int(seed),
        look_direction=None if look_direction is None else
        float(look_direction),
        sector_half_width=float(scenario_opt.get('sector_half_width', 6.0)))


def load_scenario(opt_path):
    """Read a Scenario from an option file."""
    from pseur.utils.options import parse

    opt = parse(opt_path)
    return scenario_from_opt(opt['scenario'], seed=opt['manual_seed'])
