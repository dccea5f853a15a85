use rand::RngCore;

use super::{ExactTracker, StochasticObjective};

/// The one-dimensional view `s -> f(s, x_{-i})` with every other coordinate
/// frozen at the anchor.
pub struct Restriction<'a> {
    objective: &'a dyn StochasticObjective,
    coord: usize,
    point: Vec<f64>,
    tracker: Option<Box<dyn ExactTracker + 'a>>,
}

impl<'a> Restriction<'a> {
    pub fn new(objective: &'a dyn StochasticObjective, anchor: &[f64], coord: usize) -> Self {
        assert!(coord < objective.dim(), "coordinate {coord} out of range");
        assert_eq!(anchor.len(), objective.dim(), "anchor dimension mismatch");
        Self {
            objective,
            coord,
            point: anchor.to_vec(),
            tracker: None,
        }
    }

    /// Same view, but exact restricted values come from an incremental
    /// tracker positioned at the anchor.
    pub fn tracked(objective: &'a dyn StochasticObjective, anchor: &[f64], coord: usize) -> Self {
        let mut r = Self::new(objective, anchor, coord);
        r.tracker = Some(objective.tracker(anchor));
        r
    }

    /// Reuses a tracker already positioned at `anchor`.
    pub fn with_tracker(
        objective: &'a dyn StochasticObjective,
        anchor: &[f64],
        coord: usize,
        tracker: Box<dyn ExactTracker + 'a>,
    ) -> Self {
        debug_assert_eq!(tracker.point(), anchor);
        let mut r = Self::new(objective, anchor, coord);
        r.tracker = Some(tracker);
        r
    }

    /// Hands the tracker back, repositioned so coordinate `coord` holds `s`.
    pub fn into_tracker(self, s: f64) -> Option<Box<dyn ExactTracker + 'a>> {
        let coord = self.coord;
        self.tracker.map(|mut t| {
            t.set_coord(coord, s);
            t
        })
    }

    pub fn coord(&self) -> usize {
        self.coord
    }

    pub fn anchor(&self) -> &[f64] {
        &self.point
    }

    pub fn lo(&self) -> f64 {
        self.objective.domain().lo(self.coord)
    }

    pub fn hi(&self) -> f64 {
        self.objective.domain().hi(self.coord)
    }

    pub fn project(&self, s: f64) -> f64 {
        s.clamp(self.lo(), self.hi())
    }

    pub fn alpha(&self) -> f64 {
        self.objective.alpha()
    }

    pub fn beta(&self) -> f64 {
        self.objective.beta()
    }

    pub fn g_max(&self) -> f64 {
        self.objective.g_max()
    }

    pub fn sigma(&self) -> Option<f64> {
        self.objective.noise().sigma(self.coord)
    }

    fn place(&mut self, s: f64) {
        self.point[self.coord] = s;
    }

    pub fn sample_grad(&mut self, s: f64, rng: &mut dyn RngCore) -> f64 {
        self.place(s);
        self.objective.sample_partial_grad(&self.point, self.coord, rng)
    }

    pub fn grad_exact(&mut self, s: f64) -> f64 {
        self.place(s);
        self.objective.partial_grad_exact(&self.point, self.coord)
    }

    pub fn value_exact(&mut self, s: f64) -> f64 {
        match self.tracker.as_mut() {
            Some(t) => {
                t.set_coord(self.coord, s);
                t.value()
            }
            None => {
                self.place(s);
                self.objective.value_exact(&self.point)
            }
        }
    }

    /// Full point with coordinate `i` set to `s`.
    pub fn lift(&self, s: f64) -> Vec<f64> {
        let mut x = self.point.clone();
        x[self.coord] = s;
        x
    }
}
