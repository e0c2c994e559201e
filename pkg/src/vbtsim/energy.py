"""First-order radio energy model: per-hop costs and whole-route consumption."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

# Standard first-order radio constants; packet = 512 bytes.
DEFAULT_E_ELEC = 50e-9    # J/bit, transceiver electronics
DEFAULT_E_AMP = 100e-12   # J/bit/m^2, transmit amplifier
DEFAULT_PACKET_BITS = 4096

PATH_LOSS_EXPONENT = 2    # fixed free-space d^2 amplifier law


@dataclass(frozen=True)
class RadioParams:
    e_elec: float = DEFAULT_E_ELEC
    e_amp: float = DEFAULT_E_AMP
    packet_bits: int = DEFAULT_PACKET_BITS

    def validate(self) -> None:
        if self.e_elec <= 0 or self.e_amp <= 0 or self.packet_bits <= 0:
            raise ValueError("radio parameters must be strictly positive")


def tx_cost(params: RadioParams, distance: float) -> float:
    """Energy to transmit one packet over `distance` meters."""
    if distance < 0:
        raise ValueError(f"negative distance: {distance}")
    b = params.packet_bits
    return params.e_elec * b + params.e_amp * b * distance**PATH_LOSS_EXPONENT


def rx_cost(params: RadioParams) -> float:
    """Energy to receive one packet; independent of distance."""
    return params.e_elec * params.packet_bits


# Below one packet-reception worth of energy a node can do nothing at all.
DEFAULT_E_FAIL = rx_cost(RadioParams())


def path_consumption(params: RadioParams, hop_distances: Iterable[float]) -> float:
    """Total energy drained by one packet travelling a route to the sink.

    Hops are ordered from the originating node toward the sink.  Every sender
    pays tx_cost for its hop and every receiver pays rx_cost, except the sink
    itself (unlimited power).  An empty route (the node is the sink) costs 0.
    """
    hops = list(hop_distances)
    if not hops:
        return 0.0
    total = 0.0
    for d in hops:
        total += tx_cost(params, d)
    return total + rx_cost(params) * (len(hops) - 1)
