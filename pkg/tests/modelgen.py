"""Seeded random generator for semantically valid system models.

Used by the round-trip acceptance suite and by property tests: every model
it produces must parse back from its printed form and pass all semantic
checks (asserted by the consumers, not assumed here).
"""

from __future__ import annotations

import random

from amdsl.ir import (
    AdaptiveComponentDecl,
    AdaptiveModuleDecl,
    ComponentSubtype,
    CriterionDecl,
    CriterionKind,
    Custom,
    DynamicalSystemKind,
    LearnerKind,
    LearningMode,
    LoopMode,
    MappingDecl,
    MappingKind,
    ShapingParam,
    SpaceDecl,
    SpaceKind,
    SpaceType,
    SystemModel,
    TransformKind,
    TransformationDecl,
)

_VECTOR_KINDS = [k for k in SpaceKind if k not in (SpaceKind.Phase, SpaceKind.EventFlag)]
_FRAMES = ["world", "base", "left_arm", "right_arm", "tool"]
_DESCRIPTIONS = ["sensed values", 'range "safe"', "demo \\ set", "", "torso state"]


def random_model(rng: random.Random, index: int = 0) -> SystemModel:
    name = f"sys_{index}"
    spaces: list[SpaceDecl] = []
    for i in range(rng.randint(2, 8)):
        if rng.random() < 0.15:
            kind, dim = rng.choice([SpaceKind.Phase, SpaceKind.EventFlag]), 1
        else:
            kind, dim = rng.choice(_VECTOR_KINDS), rng.randint(1, 12)
        spaces.append(
            SpaceDecl(
                name=f"s{i}",
                type=SpaceType(kind, dim, rng.choice(_FRAMES) if rng.random() < 0.4 else None),
                description=rng.choice(_DESCRIPTIONS) if rng.random() < 0.3 else None,
            )
        )

    def pick_pair(same_kind: bool) -> tuple[SpaceDecl, SpaceDecl] | None:
        candidates = []
        for a in spaces:
            for b in spaces:
                if a is b:
                    continue
                if same_kind and a.type.compatible(b.type):
                    candidates.append((a, b))
                if not same_kind and a.type.kind is not b.type.kind:
                    candidates.append((a, b))
        return rng.choice(candidates) if candidates else None

    mappings: list[MappingDecl] = []
    for i in range(rng.randint(0, 2)):
        pair = pick_pair(same_kind=False)
        if pair is None:
            break
        kind = rng.choice(list(MappingKind) + [Custom("TableLookup")])
        mappings.append(MappingDecl(f"map{i}", kind, pair[0].name, pair[1].name))

    transformations: list[TransformationDecl] = []
    for i in range(rng.randint(0, 2)):
        pair = pick_pair(same_kind=True)
        if pair is None:
            break
        kind = rng.choice(list(TransformKind) + [Custom("Rescale")])
        transformations.append(TransformationDecl(f"tf{i}", kind, pair[0].name, pair[1].name))

    modules: list[AdaptiveModuleDecl] = []
    for i in range(rng.randint(1, 3)):
        pool = [s.name for s in spaces]
        rng.shuffle(pool)
        loop = rng.choice(list(LoopMode))
        learner = rng.choice(list(LearnerKind) + [Custom("GradientRule"), None])
        learning = rng.choice(list(LearningMode)) if learner is not None else None
        n_exec = rng.randint(1, min(2, len(pool)))
        execution, pool = pool[:n_exec], pool[n_exec:]
        learning_inputs: list[str] = []
        if learner is not None and pool:
            n_learn = rng.randint(1, min(2, len(pool)))
            learning_inputs, pool = pool[:n_learn], pool[n_learn:]
        if learner is not None and not learning_inputs:
            learner, learning = None, None
        shaping = {}
        for param in ShapingParam:
            if pool and rng.random() < 0.35:
                shaping[param] = pool.pop()
        output = rng.choice([s.name for s in spaces])
        modules.append(
            AdaptiveModuleDecl(
                name=f"mod{i}",
                dynamical_system=rng.choice(list(DynamicalSystemKind) + [Custom("HopfOscillator")]),
                learner=learner,
                loop_mode=loop,
                learning_mode=learning,
                execution_inputs=tuple(execution),
                learning_inputs=tuple(learning_inputs),
                shaping_params=shaping,
                output=output,
            )
        )

    space_by_name = {s.name: s for s in spaces}
    components: list[AdaptiveComponentDecl] = []
    for i, module in enumerate(modules):
        if rng.random() < 0.25:
            continue  # leave some modules unwired
        subtype = rng.choice(
            [ComponentSubtype.Generic, ComponentSubtype.PatternGenerator]
            + ([ComponentSubtype.TrackingController] if module.loop_mode is LoopMode.ClosedLoop else [])
        )
        out_via = None
        for m in mappings + transformations:
            used = any(c.output_mapping == m.name for c in components)
            if not used and space_by_name[m.from_space].type.compatible(
                space_by_name[module.output].type
            ):
                if rng.random() < 0.5:
                    out_via = m.name
                break
        in_vias = tuple(
            m.name
            for m in mappings + transformations
            if m.name != out_via and m.to_space in module.input_spaces() and rng.random() < 0.7
        )
        criterion = None
        if rng.random() < 0.4:
            criterion = CriterionDecl(
                rng.choice(list(CriterionKind) + [Custom("energy_low")]),
                "stop condition" if rng.random() < 0.5 else None,
            )
        components.append(
            AdaptiveComponentDecl(
                name=f"comp{i}",
                subtype=subtype,
                module=module.name,
                input_mappings=in_vias,
                output_mapping=out_via,
                criterion=criterion,
                children=(),
            )
        )

    if len(components) >= 2 and all(c.criterion for c in components) and rng.random() < 0.5:
        components.append(
            AdaptiveComponentDecl(
                name="seq",
                subtype=ComponentSubtype.Sequencer,
                children=tuple(c.name for c in components),
            )
        )

    return SystemModel(
        name=name,
        spaces=tuple(spaces),
        mappings=tuple(mappings),
        transformations=tuple(transformations),
        modules=tuple(modules),
        components=tuple(components),
    )
