// View-model: client-side form validation (the server stays authoritative)
// and the card list derived from a plan document.

import type { PerPointBlock, PlanDocument, RescuePointForm } from './types.js';

export interface VehicleRowView {
  driver: string;
  vehicleClass: string;
  seats: number;
  arrivalS: number;
}

export interface PointCard {
  pointId: string;
  priority: number;
  address: string | null;
  coordinates: string | null; // tooltip text for the address
  served: boolean;
  demandSeats: number;
  deliveredSeats: number;
  deficitSeats: number;
  coverage: number; // 0..1, full bar iff the seat rule is satisfied
  rows: VehicleRowView[];
  shelterSummary: string[];
}

export interface PlanView {
  status: PlanDocument['status'];
  objectiveS: number;
  vehiclesUsed: number;
  cards: PointCard[]; // response order = priority order
  unservedPointIds: string[];
  notices: string[];
  diagnostics: string[];
}

export function validateForm(form: RescuePointForm): string[] {
  const errors: string[] = [];
  if (!form.address || !form.address.trim()) {
    errors.push('address is required');
  }
  if (!Number.isInteger(form.nb_people) || form.nb_people < 0) {
    errors.push('nb_people must be an integer >= 0');
  }
  if (!Number.isInteger(form.nb_disabled) || form.nb_disabled < 0) {
    errors.push('nb_disabled must be an integer >= 0');
  }
  if (form.nb_people + form.nb_disabled < 1) {
    errors.push('at least one person must need evacuation');
  }
  if (!Number.isInteger(form.priority) || form.priority < 1) {
    errors.push('priority must be an integer >= 1 (1 = highest)');
  }
  return errors;
}

// Seat rule recomputed from row data; the card must agree with the server's
// served flag before anything is displayed.
export function seatCoverage(block: PerPointBlock): { delivered: number; satisfied: boolean } {
  const delivered = block.resources.reduce((sum, row) => sum + row.seats, 0);
  return { delivered, satisfied: delivered >= block.demand_seats };
}

export class CoverageMismatchError extends Error {
  constructor(pointId: string) {
    super(`plan block for ${pointId} disagrees with the seat-coverage recomputation`);
  }
}

export function buildPlanView(plan: PlanDocument): PlanView {
  const cards = plan.per_point.map((block) => {
    const { delivered, satisfied } = seatCoverage(block);
    if (satisfied !== block.served || delivered !== block.seats_delivered) {
      throw new CoverageMismatchError(block.point_id);
    }
    return {
      pointId: block.point_id,
      priority: block.priority,
      address: block.address,
      coordinates: block.location
        ? `${block.location.lat.toFixed(5)}, ${block.location.lon.toFixed(5)}`
        : null,
      served: block.served,
      demandSeats: block.demand_seats,
      deliveredSeats: delivered,
      deficitSeats: block.deficit_seats,
      coverage:
        block.demand_seats === 0 ? 1 : Math.min(1, delivered / block.demand_seats),
      rows: block.resources.map((row) => ({
        driver: row.driver_id ?? row.resource_id,
        vehicleClass: row.vehicle_class ?? 'vehicle',
        seats: row.seats,
        arrivalS: row.time_s,
      })),
      shelterSummary: block.shelters.map(
        (leg) => `${leg.persons} to ${leg.shelter_id} (${leg.time_s.toFixed(0)} s)`,
      ),
    };
  });
  return {
    status: plan.status,
    objectiveS: plan.objective_s,
    vehiclesUsed: plan.vehicles_used,
    cards,
    unservedPointIds: cards.filter((c) => !c.served).map((c) => c.pointId),
    notices: plan.notices,
    diagnostics: plan.diagnostics,
  };
}

// Pre-fill for the revise flow: the forms come back exactly as solved.
export function formsFromPlan(plan: PlanDocument): RescuePointForm[] {
  return plan.per_point.map((block) => ({
    address: block.address ?? '',
    nb_people: block.nb_people,
    nb_disabled: block.nb_disabled,
    priority: block.priority,
  }));
}
