use mav_core::harness::config::config_from_header;
use mav_core::harness::timeseries::render_timeseries;
use mav_core::IdeaPattern;
use mav_core::{run, Society, SocietyConfig};
use proptest::prelude::*;

fn final_state(config: &SocietyConfig, order: Option<&[usize]>) -> Vec<IdeaPattern> {
    let mut s = Society::new(config.clone()).unwrap();
    for _ in 0..config.iterations {
        match order {
            Some(o) => {
                s.tick_with_order(o);
            }
            None => {
                s.tick();
            }
        }
    }
    s.agents().iter().map(|a| a.embodiment).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn processing_order_does_not_matter(seed in any::<u64>(), shuffle in any::<u64>(), p in 0.0f64..=1.0) {
        let config = SocietyConfig { rows: 5, cols: 4, iterations: 25, seed, p_create: p, ..Default::default() };
        let n = config.agent_count();
        let mut order: Vec<usize> = (0..n).collect();
        let mut x = shuffle | 1;
        for i in (1..n).rev() {
            x ^= x << 13; x ^= x >> 7; x ^= x << 17;
            order.swap(i, (x % (i as u64 + 1)) as usize);
        }
        prop_assert_eq!(final_state(&config, None), final_state(&config, Some(&order)));
    }

    #[test]
    fn records_are_bounded(seed in any::<u64>(), rate in 0.0f64..=1.0, ms in any::<bool>(), im in any::<bool>()) {
        let config = SocietyConfig {
            rows: 4, cols: 4, iterations: 30, seed, mutation_rate: rate,
            mental_simulation: ms, imitation_enabled: im, ..Default::default()
        };
        let records = run(&config).unwrap();
        prop_assert_eq!(records.len(), 31);
        let mut best = 0.0f64;
        for r in &records {
            prop_assert!((0.0..=10.0).contains(&r.mean_fitness));
            prop_assert!(r.mean_fitness <= r.max_fitness_current + 1e-12);
            best = best.max(r.max_fitness_current);
            prop_assert!((r.max_fitness_so_far - best).abs() < 1e-12);
            prop_assert!(r.diversity <= 16);
            prop_assert!(r.optimal_count <= 16);
            for a in r.mean_locus_activation {
                prop_assert!((-0.5..=0.5).contains(&a));
            }
        }
    }

    #[test]
    fn header_replays_the_run(seed in any::<u64>()) {
        let config = SocietyConfig { rows: 3, cols: 5, iterations: 15, seed, ..Default::default() };
        let text = render_timeseries(&run(&config).unwrap(), &config);
        let again = config_from_header(&text).unwrap();
        prop_assert_eq!(render_timeseries(&run(&again).unwrap(), &again), text);
    }
}

#[test]
fn disabled_channels_keep_the_immobile_action() {
    for config in [
        SocietyConfig {
            p_create: 0.0,
            iterations: 100,
            ..Default::default()
        },
        SocietyConfig {
            mutation_rate: 0.0,
            iterations: 100,
            ..Default::default()
        },
    ] {
        for r in run(&config).unwrap() {
            assert_eq!(r.mean_fitness, 2.5);
            assert_eq!(r.diversity, 0);
        }
    }
}
