import { describe, expect, it } from 'vitest';

import {
  CoverageMismatchError,
  buildPlanView,
  formsFromPlan,
  seatCoverage,
  validateForm,
} from '../src/model.js';
import type { PerPointBlock, PlanDocument } from '../src/types.js';

function block(overrides: Partial<PerPointBlock> = {}): PerPointBlock {
  return {
    point_id: 'RescuePoint_01',
    priority: 1,
    address: '17 Winston Churchill Street, Compiègne',
    location: { lat: 49.4179, lon: 2.8261 },
    nb_people: 10,
    nb_disabled: 0,
    demand_seats: 10,
    served: true,
    seats_delivered: 12,
    deficit_seats: 0,
    resources: [
      { resource_id: 'A/Van', driver_id: 'A', vehicle_id: 'Van', vehicle_class: 'Van', seats: 9, time_s: 30 },
      { resource_id: 'B/SUV', driver_id: 'B', vehicle_id: 'SUV', vehicle_class: 'SUV', seats: 3, time_s: 45 },
    ],
    shelters: [{ shelter_id: 'Shelter_01', persons: 10, time_s: 60 }],
    ...overrides,
  };
}

function plan(blocks: PerPointBlock[], status: PlanDocument['status'] = 'optimal'): PlanDocument {
  return {
    status,
    objective_s: blocks.flatMap((b) => b.resources).reduce((s, r) => s + r.time_s, 0),
    vehicles_used: blocks.reduce((s, b) => s + b.resources.length, 0),
    assignments: [],
    per_point: blocks,
    shelter_occupancy: [],
    notices: [],
    diagnostics: [],
  };
}

describe('validateForm', () => {
  it('accepts a well-formed rescue point', () => {
    expect(validateForm({ address: 'x', nb_people: 100, nb_disabled: 0, priority: 1 })).toEqual([]);
  });

  it('rejects negative people counts', () => {
    const errors = validateForm({ address: 'x', nb_people: -1, nb_disabled: 0, priority: 1 });
    expect(errors.some((e) => e.includes('nb_people'))).toBe(true);
  });

  it('rejects an empty demand', () => {
    expect(
      validateForm({ address: 'x', nb_people: 0, nb_disabled: 0, priority: 1 }).length,
    ).toBeGreaterThan(0);
  });

  it('rejects priority below 1 and missing address', () => {
    const errors = validateForm({ address: ' ', nb_people: 5, nb_disabled: 0, priority: 0 });
    expect(errors.some((e) => e.includes('priority'))).toBe(true);
    expect(errors.some((e) => e.includes('address'))).toBe(true);
  });
});

describe('seatCoverage and buildPlanView', () => {
  it('recomputes delivery from row data', () => {
    expect(seatCoverage(block())).toEqual({ delivered: 12, satisfied: true });
  });

  it('builds cards in response order with full coverage', () => {
    const view = buildPlanView(
      plan([
        block(),
        block({ point_id: 'RescuePoint_02', priority: 2 }),
      ]),
    );
    expect(view.cards.map((c) => c.pointId)).toEqual(['RescuePoint_01', 'RescuePoint_02']);
    expect(view.cards[0].coverage).toBe(1);
    expect(view.unservedPointIds).toEqual([]);
  });

  it('flags unserved points and keeps a partial bar', () => {
    const view = buildPlanView(
      plan(
        [
          block({
            served: false,
            seats_delivered: 0,
            resources: [],
            deficit_seats: 10,
            shelters: [],
          }),
        ],
        'infeasible',
      ),
    );
    expect(view.unservedPointIds).toEqual(['RescuePoint_01']);
    expect(view.cards[0].coverage).toBe(0);
    expect(view.cards[0].deficitSeats).toBe(10);
  });

  it('refuses to display a block whose served flag contradicts the rows', () => {
    const bad = block({ served: false }); // rows still deliver 12 >= 10
    expect(() => buildPlanView(plan([bad]))).toThrow(CoverageMismatchError);
  });

  it('zero-demand points show a full bar', () => {
    const view = buildPlanView(
      plan([
        block({ demand_seats: 0, nb_people: 0, seats_delivered: 0, resources: [], shelters: [] }),
      ]),
    );
    expect(view.cards[0].coverage).toBe(1);
  });
});

describe('formsFromPlan', () => {
  it('pre-fills the revise forms from the solved plan', () => {
    const forms = formsFromPlan(plan([block({ nb_people: 72, priority: 2 })]));
    expect(forms).toEqual([
      {
        address: '17 Winston Churchill Street, Compiègne',
        nb_people: 72,
        nb_disabled: 0,
        priority: 2,
      },
    ]);
  });
});
