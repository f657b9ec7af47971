//! First-order radio energy model.
//!
//! Sending `m` bits over `d` meters costs `m*E + m*eps*d^2`; receiving them
//! costs `m*E`. Parameters are held in the units they are quoted in
//! (nJ/bit, pJ/bit/m^2). Each charge is summed in picojoules and converted to
//! joules with a single division, so integer-valued inputs give correctly
//! rounded joule values (1000 bits at 100 m is exactly `1.5e-4`).

use crate::forwarding::RouteTrace;

const PJ_PER_NJ: f64 = 1e3;
const PJ_PER_J: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnergyError {
    #[error("distance must be non-negative and finite, got {0}")]
    NegativeDistance(f64),
    #[error("invalid radio parameter: {0}")]
    InvalidParams(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    /// Electronics energy E, nJ per bit.
    pub elec_nj_per_bit: f64,
    /// Amplifier coefficient eps, pJ per bit per square meter.
    pub amp_pj_per_bit_m2: f64,
    /// Packet size m, bits.
    pub packet_bits: u32,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            elec_nj_per_bit: 50.0,
            amp_pj_per_bit_m2: 10.0,
            packet_bits: 1000,
        }
    }
}

impl RadioParams {
    pub fn new(
        elec_nj_per_bit: f64,
        amp_pj_per_bit_m2: f64,
        packet_bits: u32,
    ) -> Result<Self, EnergyError> {
        let p = Self {
            elec_nj_per_bit,
            amp_pj_per_bit_m2,
            packet_bits,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), EnergyError> {
        if !(self.elec_nj_per_bit > 0.0 && self.elec_nj_per_bit.is_finite()) {
            return Err(EnergyError::InvalidParams(
                "electronics energy must be positive",
            ));
        }
        if !(self.amp_pj_per_bit_m2 > 0.0 && self.amp_pj_per_bit_m2.is_finite()) {
            return Err(EnergyError::InvalidParams(
                "amplifier coefficient must be positive",
            ));
        }
        if self.packet_bits == 0 {
            return Err(EnergyError::InvalidParams(
                "packet must carry at least one bit",
            ));
        }
        Ok(())
    }

    pub fn with_packet_bits(self, packet_bits: u32) -> Self {
        Self {
            packet_bits,
            ..self
        }
    }

    /// E in joules per bit.
    pub fn elec_j_per_bit(&self) -> f64 {
        self.elec_nj_per_bit / 1e9
    }

    /// eps in joules per bit per square meter.
    pub fn amp_j_per_bit_m2(&self) -> f64 {
        self.amp_pj_per_bit_m2 / PJ_PER_J
    }

    fn electronics_pj(&self) -> f64 {
        f64::from(self.packet_bits) * self.elec_nj_per_bit * PJ_PER_NJ
    }

    fn tx_pj(&self, distance: f64) -> f64 {
        let m = f64::from(self.packet_bits);
        self.electronics_pj() + m * self.amp_pj_per_bit_m2 * distance * distance
    }
}

/// Energy to transmit one packet over `distance` meters, in joules.
pub fn tx_energy(params: &RadioParams, distance: f64) -> Result<f64, EnergyError> {
    if !(distance >= 0.0 && distance.is_finite()) {
        return Err(EnergyError::NegativeDistance(distance));
    }
    Ok(params.tx_pj(distance) / PJ_PER_J)
}

/// Energy to receive one packet, in joules.
pub fn rx_energy(params: &RadioParams) -> f64 {
    params.electronics_pj() / PJ_PER_J
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopEnergy {
    pub tx: f64,
    pub rx: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyReport {
    pub tx_energy: f64,
    pub rx_energy: f64,
    pub total: f64,
    pub per_hop: Vec<HopEnergy>,
}

/// Charges every hop transition of `trace`: the sender pays transmission at
/// the hop's length and the receiver pays one reception. Totals are summed in
/// picojoules before conversion, like the single-packet charges.
pub fn route_energy(params: &RadioParams, trace: &RouteTrace) -> EnergyReport {
    let rx_pj = params.electronics_pj();
    let mut tx_sum_pj = 0.0;
    let mut rx_sum_pj = 0.0;
    let mut per_hop = Vec::with_capacity(trace.per_hop_distance.len());
    for &d in &trace.per_hop_distance {
        let tx_pj = params.tx_pj(d);
        tx_sum_pj += tx_pj;
        rx_sum_pj += rx_pj;
        per_hop.push(HopEnergy {
            tx: tx_pj / PJ_PER_J,
            rx: rx_pj / PJ_PER_J,
        });
    }
    EnergyReport {
        tx_energy: tx_sum_pj / PJ_PER_J,
        rx_energy: rx_sum_pj / PJ_PER_J,
        total: (tx_sum_pj + rx_sum_pj) / PJ_PER_J,
        per_hop,
    }
}
