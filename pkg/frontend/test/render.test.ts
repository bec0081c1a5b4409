import { describe, expect, it } from 'vitest';

import { buildPlanView } from '../src/model.js';
import { escapeHtml, renderPlanView, renderProblem } from '../src/render.js';
import type { PlanDocument } from '../src/types.js';

const SAMPLE: PlanDocument = {
  status: 'optimal',
  objective_s: 95,
  vehicles_used: 2,
  assignments: [],
  per_point: [
    {
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
        { resource_id: 'B/SUV', driver_id: 'B', vehicle_id: 'SUV', vehicle_class: 'SUV', seats: 3, time_s: 65 },
      ],
      shelters: [{ shelter_id: 'Shelter_01', persons: 10, time_s: 60 }],
    },
    {
      point_id: 'RescuePoint_02',
      priority: 2,
      address: null,
      location: null,
      nb_people: 4,
      nb_disabled: 0,
      demand_seats: 4,
      served: false,
      seats_delivered: 0,
      deficit_seats: 4,
      resources: [],
      shelters: [],
    },
  ],
  shelter_occupancy: [],
  notices: [],
  diagnostics: [],
};

describe('renderPlanView', () => {
  it('renders cards in priority order with a full coverage bar first', () => {
    const html = renderPlanView(buildPlanView(SAMPLE), 'req-000001', null);
    const first = html.indexOf('data-point="RescuePoint_01"');
    const second = html.indexOf('data-point="RescuePoint_02"');
    expect(first).toBeGreaterThan(-1);
    expect(second).toBeGreaterThan(first);
    expect(html).toContain('width: 100%');
    expect(html).toContain('status-optimal');
    expect(html).toContain('12/10 seats');
  });

  it('surfaces deficits prominently for unserved points', () => {
    const html = renderPlanView(buildPlanView(SAMPLE), 'req-000001', null);
    expect(html).toContain('banner deficit');
    expect(html).toContain('RescuePoint_02');
    expect(html).toContain('UNSERVED, 4 seats missing');
  });

  it('shows the dispatched banner after an accept', () => {
    const html = renderPlanView(buildPlanView(SAMPLE), 'req-000001', 'accept');
    expect(html).toContain('banner decided');
    expect(html).toContain('vehicles dispatched');
  });

  it('puts geocoded coordinates in a tooltip on the address', () => {
    const html = renderPlanView(buildPlanView(SAMPLE), 'req-000001', null);
    expect(html).toContain('title="49.41790, 2.82610"');
  });
});

describe('renderProblem and escaping', () => {
  it('renders a problem document with its code', () => {
    const html = renderProblem({ code: 'geocode_failure', message: 'no <such> place', details: {} });
    expect(html).toContain('data-code="geocode_failure"');
    expect(html).toContain('no &lt;such&gt; place');
  });

  it('escapes markup in user text', () => {
    expect(escapeHtml('<img src=x>')).toBe('&lt;img src=x&gt;');
  });
});
