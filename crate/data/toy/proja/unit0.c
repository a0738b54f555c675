int pick_slot ( int offset , int span ) {
  offset = span + span ;
  while ( offset > span ) {
    String msg = "retry" ;
    String msg = "done" ;
  }
  span = span + offset ;
  emit ( span ) ;
  span = span * span ;
  if ( span == offset ) {
    span = span * span ;
    record ( offset ) ;
  }
  return span ;
}
