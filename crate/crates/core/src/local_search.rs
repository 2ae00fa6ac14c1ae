//! Hill climbing over user-supplied neighbourhood, gain and commit functions.
//!
//! Moves are enumerated afresh from the current state after every commit.

use alloc::vec::Vec;
use core::marker::PhantomData;

use crate::{
    deadline::{Deadline, Unlimited},
    error::Result,
};

/// The three primitives a search is made of.
pub trait SearchComponents {
    type State;
    type Move;

    /// Moves applicable to `state`, in the order they should be tried.
    fn neighbourhood(&self, state: &Self::State) -> Vec<Self::Move>;

    /// Objective decrease obtained by applying `mv`. Must not change `state`.
    fn gain(&self, state: &Self::State, mv: &Self::Move) -> i64;

    fn commit(&self, state: Self::State, mv: Self::Move) -> Result<Self::State>;
}

/// [`SearchComponents`] made of three closures.
pub struct FnComponents<S, M, N, G, C> {
    neighbourhood: N,
    gain: G,
    commit: C,
    _marker: PhantomData<fn(S) -> M>,
}

impl<S, M, N, G, C> FnComponents<S, M, N, G, C>
where
    N: Fn(&S) -> Vec<M>,
    G: Fn(&S, &M) -> i64,
    C: Fn(S, M) -> Result<S>,
{
    pub fn new(neighbourhood: N, gain: G, commit: C) -> Self {
        FnComponents { neighbourhood, gain, commit, _marker: PhantomData }
    }
}

impl<S, M, N, G, C> SearchComponents for FnComponents<S, M, N, G, C>
where
    N: Fn(&S) -> Vec<M>,
    G: Fn(&S, &M) -> i64,
    C: Fn(S, M) -> Result<S>,
{
    type State = S;
    type Move = M;

    fn neighbourhood(&self, state: &S) -> Vec<M> {
        (self.neighbourhood)(state)
    }

    fn gain(&self, state: &S, mv: &M) -> i64 {
        (self.gain)(state, mv)
    }

    fn commit(&self, state: S, mv: M) -> Result<S> {
        (self.commit)(state, mv)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchStrategy {
    /// Apply a maximum-gain move; ties go to the earliest in the neighbourhood.
    #[default]
    ChooseBest,
    /// Apply the first move with positive gain.
    ChooseFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// No move has positive gain.
    LocalOptimum,
    FuelExhausted,
    DeadlineExceeded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClimbOutcome<S> {
    pub state: S,
    pub steps: usize,
    /// Gain of every applied move, in order.
    pub gains: Vec<i64>,
    pub stop: StopReason,
}

/// Climbs until no improving move is left.
pub fn hill_climb<C: SearchComponents>(
    initial: C::State,
    components: &C,
    strategy: SearchStrategy,
) -> Result<(C::State, usize)> {
    let out = hill_climb_limited(initial, components, strategy, None, &Unlimited)?;
    Ok((out.state, out.steps))
}

/// Like [`hill_climb`], but stops early after `fuel` moves or once the
/// deadline expires. The state returned is always the last committed one.
pub fn hill_climb_limited<C: SearchComponents>(
    initial: C::State,
    components: &C,
    strategy: SearchStrategy,
    fuel: Option<usize>,
    deadline: &dyn Deadline,
) -> Result<ClimbOutcome<C::State>> {
    let mut state = initial;
    let mut gains = Vec::new();
    loop {
        if fuel.is_some_and(|f| gains.len() >= f) {
            return Ok(ClimbOutcome { state, steps: gains.len(), gains, stop: StopReason::FuelExhausted });
        }
        if deadline.expired() {
            return Ok(ClimbOutcome { state, steps: gains.len(), gains, stop: StopReason::DeadlineExceeded });
        }
        let mut chosen: Option<(i64, C::Move)> = None;
        for mv in components.neighbourhood(&state) {
            let g = components.gain(&state, &mv);
            if g <= 0 || chosen.as_ref().is_some_and(|(best, _)| g <= *best) {
                continue;
            }
            chosen = Some((g, mv));
            if strategy == SearchStrategy::ChooseFirst {
                break;
            }
        }
        let Some((g, mv)) = chosen else {
            return Ok(ClimbOutcome { state, steps: gains.len(), gains, stop: StopReason::LocalOptimum });
        };
        log::trace!("hill climb step {} gain {}", gains.len() + 1, g);
        state = components.commit(state, mv)?;
        gains.push(g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use alloc::vec;

    #[test]
    fn no_improving_move() {
        let c = FnComponents::new(|_: &i32| vec![1, 2, 3], |_, _| -1, |s, _| Ok(s));
        assert_eq!(hill_climb(7, &c, SearchStrategy::ChooseBest).unwrap(), (7, 0));
    }

    #[test]
    fn single_move() {
        let c = FnComponents::new(
            |s: &i32| if *s == 0 { vec![()] } else { vec![] },
            |_, _| 5,
            |s, _| Ok(s + 1),
        );
        assert_eq!(hill_climb(0, &c, SearchStrategy::ChooseFirst).unwrap(), (1, 1));
    }

    #[test]
    fn descent_to_three() {
        let c = FnComponents::new(|_: &i32| vec![-1], |s, _| if *s > 3 { 1 } else { -1 }, |s, m| Ok(s + m));
        for strategy in [SearchStrategy::ChooseBest, SearchStrategy::ChooseFirst] {
            assert_eq!(hill_climb(10, &c, strategy).unwrap(), (3, 7));
        }
    }

    #[test]
    fn strategies_pick_different_moves() {
        // moves are step sizes; gain is the size while the state stays ≤ 10
        let c = FnComponents::new(
            |_: &i32| vec![1, 4, 2],
            |s, m| if s + m <= 10 { *m as i64 } else { -1 },
            |s, m| Ok(s + m),
        );
        let best = hill_climb_limited(0, &c, SearchStrategy::ChooseBest, None, &Unlimited).unwrap();
        assert_eq!(best.gains, vec![4, 4, 2]);
        let first = hill_climb_limited(0, &c, SearchStrategy::ChooseFirst, None, &Unlimited).unwrap();
        assert_eq!(first.gains, vec![1; 10]);
    }

    #[test]
    fn best_ties_go_to_earliest() {
        let c = FnComponents::new(
            |s: &Vec<u8>| if s.is_empty() { vec![1u8, 2, 3] } else { vec![] },
            |_, m| if *m == 1 { 1 } else { 2 },
            |mut s, m| {
                s.push(m);
                Ok(s)
            },
        );
        assert_eq!(hill_climb(vec![], &c, SearchStrategy::ChooseBest).unwrap().0, vec![2]);
    }

    #[test]
    fn fuel_and_commit_errors() {
        let c = FnComponents::new(|_: &i32| vec![()], |_, _| 1, |s, _| Ok(s + 1));
        let out = hill_climb_limited(0, &c, SearchStrategy::ChooseBest, Some(4), &Unlimited).unwrap();
        assert_eq!((out.state, out.stop), (4, StopReason::FuelExhausted));

        let c = FnComponents::new(|_: &i32| vec![()], |_, _| 1, |_, _| Err(Error::InvalidState("nope".into())));
        assert!(hill_climb(0, &c, SearchStrategy::ChooseBest).is_err());
    }
}
