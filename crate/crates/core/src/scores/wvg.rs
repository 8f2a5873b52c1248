use super::{evaluate_template, ScoreVector, TemplateId};
use crate::charfun::cf_wvg;
use crate::error::Result;
use crate::model::WeightedVotingGame;

/// Power index of a weighted voting game through a template score. Minimal
/// winning coalitions stand in for AXps and winning coalitions for WAXps.
pub fn wvg_power_index(game: &WeightedVotingGame, id: TemplateId) -> Result<ScoreVector> {
    let table = cf_wvg(game);
    let family = match id {
        TemplateId::Andjiga => Some(game.winning_coalitions()),
        _ if id.uses_family() => Some(game.minimal_winning_coalitions()),
        _ => None,
    };
    let values = evaluate_template(id, &table, family.as_deref())?;
    Ok(ScoreVector {
        label: format!("{id} {game}"),
        template: None,
        charfn: Some(table.id().clone()),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, int};

    #[test]
    fn small_game_indices() {
        let g = fixtures::small_game();
        let ss = wvg_power_index(&g, TemplateId::ShapleyShubik).unwrap();
        assert_eq!(ss.values, vec![frac(2, 3), frac(1, 6), frac(1, 6)]);
        let hp = wvg_power_index(&g, TemplateId::HollerPackel).unwrap();
        assert_eq!(hp.values, vec![int(1), frac(1, 2), frac(1, 2)]);
    }

    #[test]
    fn symmetric_game_gives_thirds() {
        let g = WeightedVotingGame::new(2, vec![1, 1, 1]).unwrap();
        let ss = wvg_power_index(&g, TemplateId::ShapleyShubik).unwrap();
        assert_eq!(ss.values, vec![frac(1, 3); 3]);
    }

    #[test]
    fn unanimity_game() {
        let g = WeightedVotingGame::new(4, vec![2, 1, 1]).unwrap();
        for id in TemplateId::ALL {
            let sv = wvg_power_index(&g, id).unwrap();
            // Only the grand coalition wins, so every voter is critical there alone.
            let first = sv.values[0].clone();
            assert!(sv.values.iter().all(|v| *v == first), "{id}");
        }
    }
}
