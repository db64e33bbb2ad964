//! The library against the reference oracles in `common`.

mod common;

use std::collections::BTreeSet;

use common::{q, Game};
use netgame_core::constructions::{equality_cycle, general_wind_turbine};
use netgame_core::equilibria::{enumerate_nash, is_nash, EnumerationOptions, Pruning};
use netgame_core::games::{GameInstance, UbbcInstance, UcInstance};
use netgame_core::graph::StrategyProfile;
use netgame_core::metrics::{nir_from_report, ubbc_efficient_cost};
use netgame_core::Rational;

fn to_game(inst: &GameInstance) -> Game {
    match inst {
        GameInstance::Uc(g) => Game::Uc {
            n: g.n(),
            alpha: g.alpha(),
        },
        GameInstance::Ubbc(g) => Game::Ubbc {
            budgets: g.budgets().to_vec(),
        },
    }
}

fn lib_costs(inst: &GameInstance, p: &StrategyProfile) -> Vec<Option<Rational>> {
    inst.cost(p).unwrap().costs().iter().map(|c| c.finite()).collect()
}

fn uc(n: usize, alpha: Rational) -> GameInstance {
    UcInstance::new(n, alpha).unwrap().into()
}

fn ubbc(budgets: &[usize]) -> GameInstance {
    UbbcInstance::new(budgets.to_vec()).unwrap().into()
}

/// Checks costs and Nash status on every profile, and that enumeration
/// finds exactly the oracle's equilibria.
fn agree_exhaustively(inst: &GameInstance) {
    let game = to_game(inst);
    let mut oracle_nash = BTreeSet::new();
    for s in common::profiles(&game) {
        let p = StrategyProfile::new(game.n(), s.clone()).unwrap();
        assert_eq!(lib_costs(inst, &p), common::costs(&game, &s), "{inst} {p}");
        let expected = common::is_nash(&game, &s);
        assert_eq!(is_nash(inst, &p).unwrap(), expected, "{inst} {p}");
        if expected {
            oracle_nash.insert(p);
        }
    }
    for pruning in [Pruning::NONE, Pruning::ALL] {
        let options = EnumerationOptions {
            pruning,
            ..EnumerationOptions::for_game(inst)
        };
        let report = enumerate_nash(inst, &options).unwrap();
        let found: BTreeSet<_> = report.profiles().cloned().collect();
        assert_eq!(found, oracle_nash, "{inst} {pruning:?}");
    }
}

#[test]
fn uc_three_agents_all_regimes() {
    for alpha in [q(1, 4), q(1, 2), q(1, 1), q(3, 2), q(2, 1), q(3, 1)] {
        agree_exhaustively(&uc(3, alpha));
    }
}

#[test]
fn uc_four_agents() {
    for alpha in [q(1, 2), q(3, 2), q(5, 2)] {
        agree_exhaustively(&uc(4, alpha));
    }
}

#[test]
fn ubbc_small_instances() {
    for budgets in [&[1, 1, 1][..], &[2, 1, 1], &[1, 1, 1, 1], &[2, 2, 2, 2], &[3, 1, 1, 1], &[1, 2, 1, 3]] {
        agree_exhaustively(&ubbc(budgets));
    }
}

fn oracle_nir(game: &Game) -> (usize, Option<Rational>) {
    let nash: Vec<_> = common::profiles(game)
        .into_iter()
        .filter(|s| common::is_nash(game, s))
        .collect();
    let nir = nash
        .iter()
        .filter_map(|s| common::ratio(&common::costs(game, s)))
        .max();
    (nash.len(), nir)
}

#[test]
fn frozen_nash_inequality_ratios() {
    let cases = [
        (uc(2, q(1, 2)), 2, q(3, 2)),
        (uc(3, q(1, 2)), 8, q(3, 2)),
        (ubbc(&[1, 1, 1, 1]), 53, q(5, 3)),
        (ubbc(&[1, 1, 1, 1, 1]), 425, q(7, 4)),
    ];
    for (inst, count, nir) in cases {
        let (oracle_count, oracle) = oracle_nir(&to_game(&inst));
        assert_eq!((oracle_count, oracle), (count, Some(nir)), "oracle on {inst}");
        let report = enumerate_nash(&inst, &EnumerationOptions::for_game(&inst)).unwrap();
        assert_eq!(report.nash_count(), count, "{inst}");
        assert_eq!(nir_from_report(&report).unwrap(), nir, "{inst}");
    }
}

#[test]
fn efficient_cost_is_the_brute_force_minimum() {
    let game = Game::Ubbc {
        budgets: vec![1; 4],
    };
    let best = common::profiles(&game)
        .iter()
        .filter_map(|s| {
            common::costs(&game, s)
                .into_iter()
                .sum::<Option<Rational>>()
        })
        .min()
        .unwrap();
    assert_eq!(best, q(16, 1));
    assert_eq!(ubbc_efficient_cost(4, 1).unwrap().value, 16);
}

#[test]
fn construction_costs_match_floyd_warshall() {
    let p = equality_cycle(8, 2).unwrap();
    let game = Game::Ubbc {
        budgets: vec![2; 8],
    };
    let c = common::costs(&game, p.strategies());
    assert!(c.iter().all(|&x| x == Some(q(10, 1))));
    assert_eq!(common::edge_count(p.strategies()), 16);

    let (p, _) = general_wind_turbine(11, 3).unwrap();
    let game = Game::Ubbc {
        budgets: vec![3; 11],
    };
    let c = common::costs(&game, p.strategies());
    assert_eq!(c.iter().copied().sum::<Option<Rational>>(), Some(q(154, 1)));
    assert_eq!(common::ratio(&c), Some(q(17, 10)));
}
