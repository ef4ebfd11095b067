use crate::real::Real;

/// Which closed-form family produced a [`BoundResult`].
///
/// The declaration order doubles as the deterministic tie-break order when
/// several bounds evaluate to exactly the same value in a comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundFamily {
    FukNagaevH,
    Bennett,
    Bernstein1,
    FukNagaevTail,
    WeakMoment,
    FukPth,
    SemiExp,
    ExpMoment,
    BernsteinCond,
    Rio,
    HoeffdingAzuma,
}

impl BoundFamily {
    /// Stable identifier used in CSV output and config files.
    pub fn id(self) -> &'static str {
        match self {
            BoundFamily::FukNagaevH => "fuk_nagaev_h",
            BoundFamily::Bennett => "bennett",
            BoundFamily::Bernstein1 => "bernstein1",
            BoundFamily::FukNagaevTail => "fuk_nagaev",
            BoundFamily::WeakMoment => "weak_moment",
            BoundFamily::FukPth => "fuk_pth",
            BoundFamily::SemiExp => "semi_exp",
            BoundFamily::ExpMoment => "exp_moment",
            BoundFamily::BernsteinCond => "bernstein_cond",
            BoundFamily::Rio => "rio",
            BoundFamily::HoeffdingAzuma => "hoeffding_azuma",
        }
    }
}

/// A fully evaluated tail bound.
///
/// `raw_value` is the closed-form expression exactly as written, which may
/// exceed 1; `clipped_value` is min(raw, 1), the only number that is itself a
/// probability bound. Reports print both so a reader can tell "vacuous at
/// this x" from "tight".
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult<R: Real> {
    pub family: BoundFamily,
    /// Problem inputs the bound was evaluated at, in declaration order.
    pub inputs: Vec<(&'static str, R)>,
    /// Tuning parameters that were chosen (by the caller or an optimizer).
    pub chosen_params: Vec<(&'static str, R)>,
    pub raw_value: R,
    pub clipped_value: R,
    /// Set when the inputs collapsed the main term and only a remainder
    /// (e.g. a raw truncation tail) is being reported.
    pub degenerate: bool,
}

impl<R: Real> BoundResult<R> {
    pub(crate) fn new(family: BoundFamily, raw_value: R) -> Self {
        BoundResult {
            family,
            inputs: Vec::new(),
            chosen_params: Vec::new(),
            raw_value,
            clipped_value: raw_value.min(R::one()),
            degenerate: false,
        }
    }

    pub(crate) fn input(mut self, name: &'static str, value: R) -> Self {
        self.inputs.push((name, value));
        self
    }

    pub(crate) fn param(mut self, name: &'static str, value: R) -> Self {
        self.chosen_params.push((name, value));
        self
    }

    pub(crate) fn mark_degenerate(mut self) -> Self {
        self.degenerate = true;
        self
    }

    /// Looks up a chosen parameter by name (e.g. `"alpha"`, `"y"`).
    pub fn param_value(&self, name: &str) -> Option<R> {
        self.chosen_params
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
    }

    /// Looks up a recorded input by name (e.g. `"x"`).
    pub fn input_value(&self, name: &str) -> Option<R> {
        self.inputs.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}
