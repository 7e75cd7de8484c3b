from dataclasses import dataclass, replace as dc_replace


@dataclass(frozen=True)
class Settings:
    """Numerical knobs shared by every operation.

    Operations take ``settings=None`` and fall back to ``DEFAULT_SETTINGS``.
    """
    quad_tol: float = 1e-10
    quad_rel_floor: float = 1e-13
    quad_min_panel: float = 1e-6
    gauss_order: int = 8
    min_depth: int = 2
    max_depth: int = 30
    chunk_size: int = 32768
    tail_factor: float = 1e-2
    resid_tol: float = 1e-7
    max_derivative_order: int = 12
    sample_cache_size: int = 200000
    vstar_max_cells: int = 20000
    support_levels: int = 40
    grid_n: int = 4096
    mellin_tol: float = 1e-6

    def replace(self, **overrides):
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return dc_replace(self, **overrides)


DEFAULT_SETTINGS = Settings()


def resolve(settings):
    return DEFAULT_SETTINGS if settings is None else settings
