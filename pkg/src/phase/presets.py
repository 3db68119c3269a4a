"""Named phases used by the runner."""

from ..utils.errors import PhaseError
from .phase import PhaseSpec, classify


def nls_phase(lambda0: float = 0.0) -> PhaseSpec:
    """θ(λ) = (λ - λ₀)²."""
    l0 = float(lambda0)
    return classify(PhaseSpec.polynomial([l0 * l0, -2.0 * l0, 1.0], name='nls'))


def mkdv_phase(lambda0: float = 1.0) -> PhaseSpec:
    """θ(λ) = 4(λ³ - 3λ₀²λ)."""
    l0 = float(lambda0)
    return classify(PhaseSpec.polynomial([0.0, -12.0 * l0 * l0, 0.0, 4.0], name='mkdv'))


PRESETS = {
    'nls': nls_phase,
    'mkdv': mkdv_phase,
}


def phase_from_config(block: dict) -> PhaseSpec:
    """Phase from the ``phase`` config block: a preset, coefficients or pieces."""
    preset = block.get('preset')
    if preset:
        if preset not in PRESETS:
            raise PhaseError(f"未知相位预设: {preset}")
        lambda0 = block.get('lambda0')
        if lambda0 is None:
            return PRESETS[preset]()
        return PRESETS[preset](lambda0)
    if block.get('pieces'):
        pieces = [(p['lo'], p['hi'], p['coefficients']) for p in block['pieces']]
        return classify(PhaseSpec.piecewise(pieces))
    if block.get('coefficients'):
        return classify(PhaseSpec.polynomial(block['coefficients']))
    raise PhaseError("相位配置需要 preset、coefficients 或 pieces 之一")
