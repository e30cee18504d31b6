use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::channel::{bs_ris_channel, sample_ris_ue_channel, ChannelModel, RisUeChannel};
use crate::geometry::ArrayGeometry;
use crate::precoder::{
    build_codebook, dominant_eigenmode, partial_csi_direction, select_codeword, Codebook,
};
use crate::ris_config::{
    active_array_weights, configure_bdris, configure_dris, make_grouping, Grouping,
};
use crate::{CVector, Result, C64};

use super::{trial_rng, ArchitectureSpec, ExperimentConfig, PrecodingCase};

/// One transmitter/surface/user setup whose trials produce effective
/// channels `h^T zeta` for each architecture under comparison.
#[derive(Debug, Clone)]
pub struct Link {
    geometry: ArrayGeometry,
    g: CVector,
    model: ChannelModel,
    case: PrecodingCase,
    codebook: Option<Codebook>,
    architectures: Vec<(ArchitectureSpec, Option<Grouping>)>,
    seed: u64,
}

impl Link {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        Self::from_parts(
            config.build_geometry()?,
            config.channel,
            config.case,
            &config.architectures,
            config.seed,
        )
    }

    pub fn from_parts(
        geometry: ArrayGeometry,
        model: ChannelModel,
        case: PrecodingCase,
        architectures: &[ArchitectureSpec],
        seed: u64,
    ) -> Result<Self> {
        model.validate()?;
        let g = bs_ris_channel(&geometry).g;
        let codebook = (case == PrecodingCase::Codebook).then(|| build_codebook(&geometry));
        let architectures = architectures
            .iter()
            .map(|&a| match a {
                ArchitectureSpec::Bd { groups, strategy } => {
                    Ok((a, Some(make_grouping(&geometry, groups, strategy)?)))
                }
                _ => Ok((a, None)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            geometry,
            g,
            model,
            case,
            codebook,
            architectures,
            seed,
        })
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn feed_channel(&self) -> &CVector {
        &self.g
    }

    pub fn architectures(&self) -> impl Iterator<Item = &ArchitectureSpec> {
        self.architectures.iter().map(|(a, _)| a)
    }

    pub fn architecture_count(&self) -> usize {
        self.architectures.len()
    }

    /// The channel realization of trial `trial`.
    pub fn channel(&self, trial: u64) -> Result<RisUeChannel> {
        sample_ris_ue_channel(
            &self.geometry,
            &self.model,
            &mut trial_rng(self.seed, trial),
        )
    }

    /// Beamforming vector for a realization under the configured case.
    pub fn beamformer(&self, channel: &RisUeChannel) -> Result<CVector> {
        Ok(match self.case {
            PrecodingCase::FullCsi => dominant_eigenmode(&channel.h)?.b,
            PrecodingCase::Codebook => {
                let v1 = dominant_eigenmode(&channel.h)?.b;
                select_codeword(
                    &v1,
                    self.codebook
                        .as_ref()
                        .expect("codebook built for this case"),
                )?
                .b
            }
            PrecodingCase::PartialCsi => partial_csi_direction(channel, &self.geometry)?.b,
        })
    }

    /// Effective transmit vector `zeta` of architecture `k` for beamformer `b`.
    pub fn effective_vector(&self, k: usize, b: &CVector) -> Result<CVector> {
        let (arch, grouping) = &self.architectures[k];
        match arch {
            ArchitectureSpec::Active => {
                let m = self.geometry.len() as f64;
                Ok(active_array_weights(b).unscale(m.sqrt()))
            }
            ArchitectureSpec::Dris => configure_dris(&self.g, b)?.apply(&self.g),
            ArchitectureSpec::Bd { .. } => configure_bdris(
                &self.g,
                b,
                grouping.as_ref().expect("grouping built for BD"),
            )?
            .apply(&self.g),
        }
    }

    /// `h^T zeta` for every architecture in trial `trial`.
    pub fn realize(&self, trial: u64) -> Result<Vec<C64>> {
        let channel = self.channel(trial)?;
        let b = self.beamformer(&channel)?;
        (0..self.architectures.len())
            .map(|k| Ok(channel.h.dot(&self.effective_vector(k, &b)?)))
            .collect()
    }
}
