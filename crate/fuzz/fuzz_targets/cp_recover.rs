#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snc::channel::{sample_extended_channel, ChannelModel};
use snc::gf::PrimeField;
use snc::snc::{
    build_effective_system, build_filters, build_precoders, cp_recover, EffectiveSystem,
    ExtensionPlan,
};

fn system() -> &'static EffectiveSystem {
    static EFF: OnceLock<EffectiveSystem> = OnceLock::new();
    EFF.get_or_init(|| {
        let plan = ExtensionPlan::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = sample_extended_channel(2, 2, plan.n_ext(), ChannelModel::Real, &mut rng);
        let p = build_precoders(&h, &plan, 1.0).unwrap();
        let f = build_filters(&h, &p).unwrap();
        build_effective_system(&h, &p, &f, &plan, PrimeField::binary()).unwrap()
    })
}

// One forwarded symbol per byte; values above 1 must be rejected.
fuzz_target!(|data: &[u8]| {
    let eff = system();
    let forwarded: Vec<u32> = data.iter().map(|&b| u32::from(b)).collect();
    let Ok(rec) = cp_recover(eff, &forwarded) else {
        return;
    };
    let stacked = eff.stack(&rec.messages);
    if !rec.detected_error {
        assert_eq!(eff.forward(&stacked).unwrap(), forwarded);
    }
});
